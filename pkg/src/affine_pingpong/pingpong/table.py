"""Quantitative ping-pong table: parameter schedule, diagonal frame, checks.

All checks are exact.  The diagonal frame is chosen so that the direction
``phi(b) - phi(a)`` becomes a rational unit vector; then every table radius
is rational and no square root of a norm is ever needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from ..arith import (
    AffineElement,
    Mat2,
    NormInterval,
    QuadNumber,
    eigenvalues,
    eigenvectors_arith,
    fs_distance_sq,
    op_norm,
    rational_str,
    unique_fixed_point,
    wedge,
)

SQRT2_UPPER = Fraction(707107, 500000)
ETA_CEILING = Fraction(1, 1000)
NORM_TOL = Fraction(1, 2**40)


@dataclass(frozen=True)
class TableParams:
    eps1: Fraction
    eps2: Fraction
    delta1: Fraction
    delta2: Fraction
    R1: Fraction
    R2: Fraction
    z0_norm: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("eps1", "eps2", "delta1", "delta2", "R1", "R2", "z0_norm"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.R1 < self.R2:
            raise ValueError("R1 must be at least R2")

    @property
    def gamma1(self) -> Fraction:
        return self.delta1 / self.z0_norm

    @property
    def gamma2(self) -> Fraction:
        return self.delta2 / self.z0_norm

    @property
    def xi1(self) -> Fraction:
        return self.R1 / self.z0_norm

    @property
    def xi2(self) -> Fraction:
        return self.R2 / self.z0_norm

    def to_json(self) -> dict:
        keys = ("eps1", "eps2", "delta1", "delta2", "R1", "R2", "z0_norm")
        return {k: rational_str(getattr(self, k)) for k in keys}

    @classmethod
    def from_json(cls, data: dict) -> "TableParams":
        return cls(**{k: Fraction(v) for k, v in data.items()})


def schedule_params(eta, normH, z0_norm=Fraction(1)) -> TableParams:
    """Table radii from the separation ``eta`` and a bound on ``||theta(h)||``.

    ``eps2 = eta/3``, ``gamma2 = eps2``, ``xi2 = 1/eps2``, then
    ``eps1 = eps2/H^2``, ``gamma1 = gamma2/H``, ``xi1 = (xi2 + 1) H^2`` where
    ``H`` is the upper endpoint of ``normH``.
    """
    eta = Fraction(eta)
    if not 0 < eta < ETA_CEILING:
        raise ValueError(f"eta = {eta} must lie strictly between 0 and 1/1000")
    H = normH.upper if isinstance(normH, NormInterval) else Fraction(normH)
    if H < 1:
        raise ValueError("a determinant-one matrix has norm at least 1")
    z = Fraction(z0_norm)
    eps2 = eta / 3
    gamma2 = eps2
    xi2 = 1 / eps2
    eps1 = eps2 / (H * H)
    gamma1 = gamma2 / H
    xi1 = (xi2 + 1) * H * H
    return TableParams(eps1, eps2, gamma1 * z, gamma2 * z, xi1 * z, xi2 * z, z)


_FLIP = {"<": ">", "<=": ">=", ">": "<", ">=": "<="}


@dataclass(frozen=True)
class Inequality:
    """A named exact comparison ``lhs REL rhs``; ``margin > 0`` (or ``>= 0``) means pass."""

    name: str
    lhs: QuadNumber
    relation: str
    rhs: QuadNumber
    uses: str = ""

    @classmethod
    def make(cls, name, lhs, relation, rhs, uses="") -> "Inequality":
        return cls(name, QuadNumber.coerce(lhs), relation, QuadNumber.coerce(rhs), uses)

    @property
    def margin(self) -> QuadNumber:
        if self.relation in (">", ">="):
            return self.lhs - self.rhs
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        s = self.margin.sign()
        return s > 0 if self.relation in (">", "<") else s >= 0

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs.to_json(),
            "relation": self.relation,
            "rhs": self.rhs.to_json(),
            "margin": self.margin.to_json(),
            "margin_approx": f"{self.margin.sci()}",
            "uses": self.uses,
            "pass": self.passed,
        }


def pythagorean_pair(ratio: float) -> tuple[Fraction, Fraction]:
    """Rational ``(alpha, beta)`` with ``alpha^2 + beta^2 = 1`` and ``beta/alpha ~ ratio``."""
    phi = math.atan(ratio) if math.isfinite(ratio) else math.pi / 2
    m = Fraction(math.tan(phi / 2)).limit_denominator(1000)
    m = min(max(m, Fraction(1, 1000)), Fraction(999, 1000))
    den = 1 + m * m
    return (1 - m * m) / den, 2 * m / den


def _vec_norm_float(vec) -> float:
    return math.hypot(float(vec[0]), float(vec[1]))


class DiagonalFrame:
    """Geometry of ``(a, h)`` after conjugating ``theta(a)`` to diagonal form.

    The basis change ``g`` has columns ``s u`` and ``t v`` where ``u, v`` are
    the arithmetic eigenvectors of ``theta(a)`` and ``s, t`` are chosen in
    Q(sqrt(delta)) so that ``g^-1 (phi(b) - phi(a)) = (alpha, beta)`` is a
    rational unit vector.  In this frame ``phi(a) = 0``, ``theta(a)`` is
    ``diag(lam, 1/lam)`` and ``||phi(b) - phi(a)|| = 1``.
    """

    LINE_NAMES = ("e1", "e2", "h.e1", "h.e2", "z0")

    def __init__(self, a: AffineElement, h: AffineElement, pythagorean: tuple[Fraction, Fraction] | None = None):
        self.a = a
        self.h = h
        self.b = h * a * h.inverse()
        a_lin = a.linear
        self.lam, self.lam_inv = eigenvalues(a_lin)
        self.abs_lam = abs(self.lam)
        self.u, self.v = eigenvectors_arith(a_lin)
        self.phi_a = unique_fixed_point(a)
        self.phi_b = h.apply(self.phi_a)
        if self.phi_b == self.phi_a:
            raise ValueError("h fixes phi(a); not in general affine position")
        v0 = tuple(QuadNumber(c) for c in (self.phi_b - self.phi_a))
        self.v0 = v0
        det = wedge(self.u, self.v)
        self.c1 = wedge(v0, self.v) / det
        self.c2 = wedge(self.u, v0) / det
        if pythagorean is None:
            ratio = (abs(float(self.c2)) * _vec_norm_float(self.v)) / (abs(float(self.c1)) * _vec_norm_float(self.u))
            pythagorean = pythagorean_pair(ratio)
        self.alpha, self.beta = (Fraction(x) for x in pythagorean)
        if self.alpha * self.alpha + self.beta * self.beta != 1 or self.alpha <= 0 or self.beta <= 0:
            raise ValueError("frame needs a positive rational unit vector")
        s = self.c1 / self.alpha
        t = self.c2 / self.beta
        self.g = Mat2.from_columns((s * self.u[0], s * self.u[1]), (t * self.v[0], t * self.v[1]))
        self.g_inv = self.g.inverse()
        a_prime = self.g_inv * Mat2(*[QuadNumber(x) for x in a_lin.entries()]) * self.g
        if a_prime != Mat2(self.lam, QuadNumber(0), QuadNumber(0), self.lam_inv):
            raise ArithmeticError("diagonalization failed; this is a bug")
        z0 = self.g_inv.apply(v0)
        if z0[0] != self.alpha or z0[1] != self.beta:
            raise ArithmeticError("frame normalisation failed; this is a bug")
        self.h_prime = self.g_inv * Mat2(*[QuadNumber(x) for x in h.linear.entries()]) * self.g
        one, zero = QuadNumber(1), QuadNumber(0)
        self.lines = {
            "e1": (one, zero),
            "e2": (zero, one),
            "h.e1": self.h_prime.column(0),
            "h.e2": self.h_prime.column(1),
            "z0": (QuadNumber(self.alpha), QuadNumber(self.beta)),
        }
        self.dist_sq = {
            (p, q): fs_distance_sq(self.lines[p], self.lines[q]) for p, q in combinations(self.LINE_NAMES, 2)
        }
        self.norm_h = op_norm(self.h_prime, NORM_TOL)
        self.H = self.norm_h.upper
        self.h_frobenius_sq = self.h_prime.frobenius_sq()
        self._powers: dict[int, QuadNumber] = {}

    z0_norm = Fraction(1)

    def lam_power(self, ell: int) -> QuadNumber:
        """``|lam|^ell``, cached."""
        if ell not in self._powers:
            self._powers[ell] = self.abs_lam**ell
        return self._powers[ell]

    def table_pairs(self):
        """Pairs among the four eigen-directions (the set V and theta(h)V)."""
        return [k for k in self.dist_sq if "z0" not in k]

    def z0_pairs(self):
        return [k for k in self.dist_sq if "z0" in k]

    def min_dist_sq(self) -> QuadNumber:
        return min(self.dist_sq.values())

    def summary(self) -> dict:
        return {
            "lambda": self.lam.to_json(),
            "phi_a": self.phi_a.to_json(),
            "phi_b": self.phi_b.to_json(),
            "unit_direction": [rational_str(self.alpha), rational_str(self.beta)],
            "basis_change": [x.to_json() for x in self.g.entries()],
            "h_linear_in_frame": [x.to_json() for x in self.h_prime.entries()],
            "norm_h": self.norm_h.to_json(),
            "dist_sq": {f"{p}|{q}": d.to_json() for (p, q), d in self.dist_sq.items()},
        }


def _pair_name(key) -> str:
    return f"{key[0]}|{key[1]}"


def check_norm_bound(H, frobenius_sq, prefix: str = "norm.h") -> list[Inequality]:
    """``H >= ||M||`` for a determinant-one ``M`` iff ``H >= 1`` and ``H^2 + H^-2 >= ||M||_F^2``."""
    H = Fraction(H)
    return [
        Inequality.make(f"{prefix}.at_least_one", H, ">=", 1),
        Inequality.make(f"{prefix}.frobenius", H * H + 1 / (H * H), ">=", frobenius_sq),
    ]


def check_proper_table(params: TableParams, frame: DiagonalFrame) -> list[Inequality]:
    p = params
    z = frame.z0_norm
    out = [Inequality.make("proper.1", z, ">", 2 * max(p.delta1, p.delta2))]
    bound2 = (2 * max(p.eps1, p.eps2)) ** 2
    for key in frame.table_pairs():
        out.append(Inequality.make(f"proper.2[{_pair_name(key)}]", frame.dist_sq[key], ">", bound2))
    mixed = max(p.eps1 + p.delta2 / z, p.eps2 + p.delta1 / z)
    for key in frame.z0_pairs():
        out.append(Inequality.make(f"proper.3[{_pair_name(key)}]", frame.dist_sq[key], ">", mixed**2))
    out.append(Inequality.make("proper.4.radii", p.R1, ">=", p.R2))
    reach = (p.eps1 + p.eps2 + z / p.R2) ** 2
    for key in frame.table_pairs():
        out.append(Inequality.make(f"proper.4[{_pair_name(key)}]", frame.dist_sq[key], ">", reach))
    return out


def check_players(params: TableParams, frame: DiagonalFrame, ell: int) -> list[Inequality]:
    p = params
    H = frame.H
    big = frame.lam_power(ell)
    uses = "upper bound H of the operator norm of theta(h) in the frame"
    return [
        Inequality.make("players.i.a", big.inverse() ** 2, "<=", p.eps1**2),
        Inequality.make("players.i.b", p.R1, "<=", big * (p.eps1 * p.delta2)),
        Inequality.make("players.i.b.inner", p.R1, "<=", big * (p.eps1 * p.delta1)),
        Inequality.make("players.ii.a", H * H, "<=", p.eps2 / p.eps1, uses),
        Inequality.make("players.ii.b", p.R2 + frame.z0_norm, "<=", p.R1 / H, uses),
        Inequality.make("players.ii.c", H, "<=", p.delta2 / p.delta1, uses),
    ]


def check_norm_dilation(params: TableParams, frame: DiagonalFrame, ell: int) -> list[Inequality]:
    p = params
    H = frame.H
    big = frame.lam_power(ell)
    return [
        Inequality.make("dilation.i", p.eps1, ">", big.inverse()),
        Inequality.make(
            "dilation.ii",
            8 * SQRT2_UPPER * H**7,
            "<",
            big * (p.eps1 * min(Fraction(1), p.delta1 / frame.z0_norm)),
            "upper bound H; sqrt(2) replaced by a rational upper bound",
        ),
    ]


def master_inequality(eta, frame: DiagonalFrame, ell: int) -> Inequality:
    eta = Fraction(eta)
    return Inequality.make(
        "master", frame.lam_power(ell), ">", eta**-4 * frame.H**10, "upper bound H of ||theta(h)|| in the frame"
    )


def check_eta(eta, frame: DiagonalFrame) -> list[Inequality]:
    eta = Fraction(eta)
    out = [
        Inequality.make("eta.positive", eta, ">", 0),
        Inequality.make("eta.ceiling", eta, "<", ETA_CEILING),
    ]
    for key, d in frame.dist_sq.items():
        out.append(Inequality.make(f"eta.separation[{_pair_name(key)}]", d, ">", eta * eta))
    return out


def static_checks(params: TableParams, frame: DiagonalFrame, eta) -> list[Inequality]:
    """Checks that do not depend on the power ``ell``."""
    players = [q for q in check_players(params, frame, 1) if q.name.startswith("players.ii")]
    return (
        check_norm_bound(frame.H, frame.h_frobenius_sq)
        + check_eta(eta, frame)
        + check_proper_table(params, frame)
        + players
    )


def power_checks(params: TableParams, frame: DiagonalFrame, eta, ell: int) -> list[Inequality]:
    players = [q for q in check_players(params, frame, ell) if q.name.startswith("players.i.")]
    return players + check_norm_dilation(params, frame, ell) + [master_inequality(eta, frame, ell)]


def all_checks(params: TableParams, frame: DiagonalFrame, eta, ell: int) -> list[Inequality]:
    return static_checks(params, frame, eta) + power_checks(params, frame, eta, ell)


def minimal_power(passes, start: int = 1, limit: int = 10**6) -> int:
    """Smallest ``ell >= start`` with ``passes(ell)`` for a monotone predicate."""
    if passes(start):
        return start
    lo, hi = start, start * 2
    while not passes(hi):
        lo = hi
        hi *= 2
        if hi > limit:
            raise ValueError(f"no passing power below {limit}")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if passes(mid):
            hi = mid
        else:
            lo = mid
    return hi


@dataclass
class LinearFrame:
    """Frame for the projective variant: columns are the arithmetic eigenvectors."""

    a: Mat2
    h: Mat2
    lam: QuadNumber = field(init=False)
    abs_lam: QuadNumber = field(init=False)

    def __post_init__(self):
        self.lam, _ = eigenvalues(self.a)
        self.abs_lam = abs(self.lam)
        u, v = eigenvectors_arith(self.a)
        self.g = Mat2.from_columns(u, v)
        self.g_inv = self.g.inverse()
        self.h_prime = self.g_inv * Mat2(*[QuadNumber(x) for x in self.h.entries()]) * self.g
        one, zero = QuadNumber(1), QuadNumber(0)
        self.lines = {"e1": (one, zero), "e2": (zero, one), "h.e1": self.h_prime.column(0), "h.e2": self.h_prime.column(1)}
        names = list(self.lines)
        self.dist_sq = {(p, q): fs_distance_sq(self.lines[p], self.lines[q]) for p, q in combinations(names, 2)}
        self.norm_h = op_norm(self.h_prime, NORM_TOL)
        self.H = self.norm_h.upper
        self.h_frobenius_sq = self.h_prime.frobenius_sq()

    def summary(self) -> dict:
        return {
            "lambda": self.lam.to_json(),
            "basis_change": [x.to_json() for x in self.g.entries()],
            "h_linear_in_frame": [x.to_json() for x in self.h_prime.entries()],
            "norm_h": self.norm_h.to_json(),
            "dist_sq": {f"{p}|{q}": d.to_json() for (p, q), d in self.dist_sq.items()},
        }


def linear_checks(frame: LinearFrame, ell: int) -> list[Inequality]:
    """Containment and disjointness for the projective ping-pong of ``a^ell, h a^ell h^-1``.

    ``eps1 = |lam|^-ell`` gives ``a^ell(X - A-) in A+``; the sets for ``b``
    sit in ``eps2 = eps1 H^2`` neighbourhoods of ``h e1, h e2``.  All four
    sets are disjoint once every pair of lines is more than ``2 eps2`` apart.
    """
    eps1 = frame.abs_lam ** (-ell)
    eps2 = eps1 * (frame.H * frame.H)
    out = check_norm_bound(frame.H, frame.h_frobenius_sq)
    out.append(Inequality.make("linear.contraction", (frame.abs_lam**ell).inverse() ** 2, "<=", eps1 * eps1))
    for key, d in frame.dist_sq.items():
        out.append(Inequality.make(f"linear.disjoint[{_pair_name(key)}]", d, ">", 4 * eps2 * eps2, "upper bound H"))
    return out
