"""Bounded searches for a hyperbolic element and a general-position partner,
and the choice among the three separated configurations."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from ..arith import (
    AffineElement,
    NormInterval,
    QuadNumber,
    RationalPoint,
    WordPath,
    ball_layers,
    eigenvectors_arith,
    fs_distance_sq,
    radius_exceeds_norm,
    set_norm,
    spectral_radius,
    unique_fixed_point,
    wedge,
)
from ..arith.balls import DEFAULT_BALL_CAP
from ..errors import BudgetExceeded, GlobalFixedPointError, VirtuallySolvableSignature


def find_hyperbolic(
    S: Sequence[AffineElement], max_power: int = 12, ball_cap: int = DEFAULT_BALL_CAP
) -> tuple[AffineElement, int, WordPath]:
    """Smallest ``N1`` with ``Lambda(theta(S)^N1) > 2 ||theta(S)||`` and a witness.

    Returns ``(a0, N1, word)``.  The witness maximises the spectral radius
    over the ball, ties broken by the 3x3 embedding.
    """
    mats = [s.linear for s in S]
    best_r: QuadNumber = QuadNumber(1)
    best_w: WordPath | None = None
    explored = 0
    for k, layer in enumerate(ball_layers(S, max_power, linear_only=True, cap=ball_cap), start=1):
        explored = k
        for w in layer:
            r = spectral_radius(w.evaluated.linear)
            if (
                best_w is None
                or r > best_r
                or (r == best_r and w.evaluated.order_key() < best_w.evaluated.order_key())
            ):
                best_r, best_w = r, w
        if best_r > 1 and all(radius_exceeds_norm(best_r, m, 2) for m in mats):
            return best_w.evaluated, k, best_w
        if not layer:
            break
    if best_r == 1:
        raise VirtuallySolvableSignature(explored)
    raise BudgetExceeded(
        f"largest spectral radius {float(best_r):.6g} in S^{explored} does not exceed 2 ||theta(S)||",
        explored=explored,
    )


def in_general_position(a0: AffineElement, h: AffineElement, eig=None, phi=None) -> bool:
    """``h`` moves both eigenlines of ``theta(a0)`` off both, and moves ``phi(a0)``."""
    u, v = eig if eig is not None else eigenvectors_arith(a0.linear)
    p = phi if phi is not None else unique_fixed_point(a0)
    hl = h.linear
    for x in (u, v):
        hx = hl.apply(x)
        for y in (u, v):
            if wedge(hx, y) == 0:
                return False
    return h.apply(p) != p


def common_fixed_point(S: Sequence[AffineElement], candidate: RationalPoint) -> bool:
    return all(s.apply(candidate) == candidate for s in S)


def find_general_position(
    S: Sequence[AffineElement], a0: AffineElement, max_power: int = 12, ball_cap: int = DEFAULT_BALL_CAP
) -> tuple[AffineElement, int, WordPath]:
    """Smallest ``N2`` and ``h0`` in ``S^N2`` in general affine position w.r.t. ``a0``.

    Any point fixed by all of ``S`` must be ``phi(a0)``, so a global fixed
    point is detected before searching.  Within a layer candidates are tried
    in 3x3-embedding order.
    """
    phi = unique_fixed_point(a0)
    if common_fixed_point(S, phi):
        raise GlobalFixedPointError(phi)
    eig = eigenvectors_arith(a0.linear)
    explored = 0
    for k, layer in enumerate(ball_layers(S, max_power, cap=ball_cap), start=1):
        explored = k
        for w in sorted(layer, key=lambda w: w.evaluated.order_key()):
            if in_general_position(a0, w.evaluated, eig, phi):
                return w.evaluated, k, w
        if not layer:
            break
    raise BudgetExceeded(f"no element in general position within S^{explored}", explored=explored)


@dataclass
class CaseGeometry:
    """One candidate configuration ``(a, h)`` with its five directions."""

    index: int
    a: AffineElement
    h: AffineElement
    lines: dict
    dist_sq: dict

    @property
    def b(self) -> AffineElement:
        return self.h * self.a * self.h.inverse()

    @property
    def min_dist_sq(self) -> QuadNumber:
        return min(self.dist_sq.values())

    def to_json(self) -> dict:
        return {
            "case": self.index,
            "a": self.a.to_literal(),
            "h": self.h.to_literal(),
            "min_dist_sq": self.min_dist_sq.to_json(),
            "min_dist_sq_approx": f"{self.min_dist_sq.sci()}",
            "dist_sq": {f"{p}|{q}": d.to_json() for (p, q), d in self.dist_sq.items()},
        }


def _case_geometry(index: int, a: AffineElement, h: AffineElement, eig) -> CaseGeometry:
    phi = unique_fixed_point(a)
    img = h.apply(phi)
    v0 = (QuadNumber(img.x - phi.x), QuadNumber(img.y - phi.y))
    hl = h.linear
    u, v = eig
    lines = {"v0": v0, "u": u, "v": v, "h.u": hl.apply(u), "h.v": hl.apply(v)}
    dist = {}
    for p, q in combinations(lines, 2):
        if any(lines[p][i] != 0 for i in (0, 1)) and any(lines[q][i] != 0 for i in (0, 1)):
            dist[(p, q)] = fs_distance_sq(lines[p], lines[q])
        else:
            dist[(p, q)] = QuadNumber(0)
    return CaseGeometry(index, a, h, lines, dist)


@dataclass
class GeometryReport:
    cases: list
    chosen: int
    n4: int
    n5: int
    norm_theta_s: NormInterval
    meets_n5_bound: bool

    @property
    def selected(self) -> CaseGeometry:
        return self.cases[self.chosen - 1]

    def to_json(self) -> dict:
        return {
            "chosen_case": self.chosen,
            "N4": self.n4,
            "N5": self.n5,
            "norm_theta_S": self.norm_theta_s.to_json(),
            "meets_N5_separation": self.meets_n5_bound,
            "cases": [c.to_json() for c in self.cases],
        }


def exponents(n1: int, n2: int, n4: int | None = None) -> dict:
    n3 = 30 * n1 + 2 * n2
    return {
        "N1": n1,
        "N2": n2,
        "N3": n3,
        "N4": n4 if n4 is not None else 4 * n3 + 3 * n1,
        "N5": 16 * (n1 + n2) * (n1 + n3),
    }


def separation_select(
    a0: AffineElement,
    h0: AffineElement,
    S: Sequence[AffineElement],
    n4: int,
    *,
    n5: int | None = None,
    norm_theta_s: NormInterval | None = None,
) -> tuple[GeometryReport, int, tuple[AffineElement, AffineElement, AffineElement]]:
    """Evaluate the three candidate direction sets and keep the best separated.

    Case 1 is ``(a0, h0)``, case 2 is ``(a0, b0^N4)`` and case 3 is
    ``(b0, a0^N4)`` with ``b0 = h0 a0 h0^-1``.  The largest minimal squared
    distance wins; ties go to the lower case index.
    """
    if n4 < 1:
        raise ValueError("N4 must be positive")
    if norm_theta_s is None:
        norm_theta_s = set_norm([s.linear for s in S])
    b0 = h0 * a0 * h0.inverse()
    u, v = eigenvectors_arith(a0.linear)
    hl = h0.linear
    cases = [
        _case_geometry(1, a0, h0, (u, v)),
        _case_geometry(2, a0, b0**n4, (u, v)),
        _case_geometry(3, b0, a0**n4, (hl.apply(u), hl.apply(v))),
    ]
    best = cases[0]
    for c in cases[1:]:
        if c.min_dist_sq > best.min_dist_sq:
            best = c
    if best.min_dist_sq == 0:
        raise ArithmeticError("all three candidate configurations are degenerate; upstream bug")
    meets = False
    if n5 is not None:
        lo = norm_theta_s.lower
        meets = lo > 0 and best.min_dist_sq >= Fraction(1) / lo ** (2 * n5)
    report = GeometryReport(cases, best.index, n4, n5 or 0, norm_theta_s, meets)
    return report, best.index, (best.a, best.h, best.b)
