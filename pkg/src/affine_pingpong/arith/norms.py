"""Operator norm enclosures and spectral radii.

Norms are irrational, so every norm is returned as a rational interval
produced by exact bisection on the characteristic polynomial of ``M^T M``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Callable, Iterable

from ..errors import IndeterminateError
from .matrix import AffineElement, Mat2
from .quadratic import QuadNumber, as_fraction, rational_str

DEFAULT_TOL = Fraction(1, 10**9)
MAX_REFINEMENTS = 60


@dataclass(frozen=True)
class NormInterval:
    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("empty interval")

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def contains(self, x) -> bool:
        return self.lower <= x <= self.upper

    def to_json(self) -> dict:
        return {"lower": rational_str(self.lower), "upper": rational_str(self.upper)}

    @classmethod
    def from_json(cls, data) -> "NormInterval":
        return cls(Fraction(data["lower"]), Fraction(data["upper"]))

    @classmethod
    def hull(cls, items: Iterable["NormInterval"]) -> "NormInterval":
        items = list(items)
        return cls(max(i.lower for i in items), max(i.upper for i in items))


def _sign(x) -> int:
    if isinstance(x, QuadNumber):
        return x.sign()
    return (x > 0) - (x < 0)


def _upper_rational(x) -> Fraction:
    if isinstance(x, QuadNumber):
        return x.enclose(32)[1]
    return as_fraction(x)


def norm_sq_at_most(s2, trace_sq, det_sq) -> bool:
    """Decide ``s2 >= mu_max`` where ``mu_max`` is the top root of ``x^2 - T x + D^2``.

    ``trace_sq`` is the Frobenius square ``T`` and ``det_sq`` is ``det(M)^2``;
    all arguments may be rationals or QuadNumbers of one field.
    """
    w = 2 * s2 - trace_sq
    if _sign(w) < 0:
        return False
    return _sign(w * w - (trace_sq * trace_sq - 4 * det_sq)) >= 0


def mat_norm_sq_below(M: Mat2, s2) -> bool:
    """Exact test ``||M||^2 <= s2``."""
    d = M.det()
    return norm_sq_at_most(s2, M.frobenius_sq(), d * d)


def op_norm(M: Mat2, tol=DEFAULT_TOL) -> NormInterval:
    """Enclose the largest singular value of ``M`` within ``tol``.

    Works for integer, rational and QuadNumber entries.  The bracket starts
    from ``[sqrt(T/2), sqrt(T)]`` with ``T`` the Frobenius square.
    """
    tol = as_fraction(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    T = M.frobenius_sq()
    d = M.det()
    D2 = d * d
    t_hi = _upper_rational(T)
    if t_hi <= 0:
        return NormInterval(Fraction(0), Fraction(0))
    lo = Fraction(0)
    r = isqrt(t_hi.numerator // t_hi.denominator)
    hi = Fraction(r + 1)
    # sigma_max^2 >= T/2, so a lower start is safe once checked
    start = Fraction(isqrt(max(0, (t_hi.numerator // t_hi.denominator) // 2 - 1)))
    if start > 0 and not norm_sq_at_most(start * start, T, D2):
        lo = start
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if norm_sq_at_most(mid * mid, T, D2):
            hi = mid
        else:
            lo = mid
    return NormInterval(lo, hi)


def _iota_gram(g: AffineElement) -> list[list[int]]:
    m = g.iota()
    return [[sum(m[k][i] * m[k][j] for k in range(3)) for j in range(3)] for i in range(3)]


def _charpoly3(B: list[list]) -> tuple:
    """Coefficients ``(c2, c1, c0)`` of ``x^3 - c2 x^2 + c1 x - c0``."""
    c2 = B[0][0] + B[1][1] + B[2][2]
    c1 = (
        B[0][0] * B[1][1] - B[0][1] * B[1][0]
        + B[0][0] * B[2][2] - B[0][2] * B[2][0]
        + B[1][1] * B[2][2] - B[1][2] * B[2][1]
    )
    c0 = (
        B[0][0] * (B[1][1] * B[2][2] - B[1][2] * B[2][1])
        - B[0][1] * (B[1][0] * B[2][2] - B[1][2] * B[2][0])
        + B[0][2] * (B[1][0] * B[2][1] - B[1][1] * B[2][0])
    )
    return c2, c1, c0


def _no_root_above(x: Fraction, c2, c1, c0) -> bool:
    # For a real-rooted cubic, Descartes' rule on p(x + y) counts roots > x exactly.
    coeffs = [Fraction(1), 3 * x - c2, 3 * x * x - 2 * c2 * x + c1, x**3 - c2 * x * x + c1 * x - c0]
    signs = [(c > 0) - (c < 0) for c in coeffs if c != 0]
    changes = sum(1 for i in range(len(signs) - 1) if signs[i] != signs[i + 1])
    return changes == 0


def affine_norm(g: AffineElement, tol=DEFAULT_TOL) -> NormInterval:
    """Enclose the operator norm of the 3x3 embedding of ``g``."""
    tol = as_fraction(tol)
    B = _iota_gram(g)
    c2, c1, c0 = _charpoly3(B)
    lo, hi = Fraction(0), Fraction(isqrt(c2) + 1)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if _no_root_above(mid * mid, c2, c1, c0):
            hi = mid
        else:
            lo = mid
    return NormInterval(lo, hi)


def set_norm(mats: Iterable[Mat2], tol=DEFAULT_TOL) -> NormInterval:
    """Enclosure of ``max ||M||`` over a finite set."""
    return NormInterval.hull(op_norm(m, tol) for m in mats)


def spectral_radius(M: Mat2) -> QuadNumber:
    """Largest eigenvalue modulus of an integer matrix of determinant one."""
    if M.det() != 1:
        raise ValueError("spectral_radius expects determinant 1")
    t = M.trace()
    if abs(t) <= 2:
        return QuadNumber(1)
    return QuadNumber(Fraction(abs(t), 2), Fraction(1, 2), t * t - 4)


def leading_eigenvalue(M: Mat2) -> QuadNumber:
    """The real eigenvalue of largest modulus, with its sign."""
    if M.det() != 1:
        raise ValueError("leading_eigenvalue expects determinant 1")
    t = M.trace()
    if abs(t) <= 2:
        raise ValueError(f"trace {t}: not hyperbolic")
    s = 1 if t > 0 else -1
    return QuadNumber(Fraction(t, 2), Fraction(s, 2), t * t - 4)


def radius_exceeds_norm(radius: QuadNumber, M: Mat2, factor: int = 2) -> bool:
    """Exact test ``radius > factor * ||M||``."""
    x = radius * radius / (factor * factor)
    d = M.det()
    T = M.frobenius_sq()
    w = 2 * x - T
    if w.sign() <= 0:
        return False
    return (w * w - (T * T - 4 * d * d)).sign() > 0


def decide_greater(
    enclose_left: Callable[[Fraction], tuple[Fraction, Fraction]],
    enclose_right: Callable[[Fraction], tuple[Fraction, Fraction]],
    tol=Fraction(1, 2**20),
    rounds: int = MAX_REFINEMENTS,
) -> bool:
    """Decide ``left > right`` from enclosures refined on demand.

    Each callable maps a tolerance to ``(lo, hi)``.  The tolerance is halved
    until the intervals are disjoint; after ``rounds`` halvings an
    IndeterminateError is raised.
    """
    tol = as_fraction(tol)
    for _ in range(rounds):
        l_lo, l_hi = enclose_left(tol)
        r_lo, r_hi = enclose_right(tol)
        if l_lo > r_hi:
            return True
        if l_hi < r_lo:
            return False
        tol /= 2
    raise IndeterminateError(f"comparison still overlapping at tolerance {float(tol):.3e}")
