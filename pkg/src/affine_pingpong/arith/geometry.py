"""Projective distances, arithmetic eigenvectors and fixed-point sets."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .matrix import AffineElement, Mat2, RationalPoint
from .norms import NormInterval, leading_eigenvalue, op_norm
from .quadratic import QuadNumber, as_fraction, rational_str


def wedge(u, v):
    return u[0] * v[1] - u[1] * v[0]


def dot(u, v):
    return u[0] * v[0] + u[1] * v[1]


def fs_distance_sq(u, v) -> QuadNumber:
    """Squared Fubini-Study distance between the lines spanned by ``u`` and ``v``.

    ``d^2 = (u1 v2 - u2 v1)^2 / (|u|^2 |v|^2)``, exact over Q(sqrt(delta)).
    """
    nu = dot(u, u)
    nv = dot(v, v)
    if nu == 0 or nv == 0:
        raise ValueError("projective distance of a zero vector")
    w = wedge(u, v)
    return QuadNumber.coerce(w * w) / (QuadNumber.coerce(nu) * nv)


def eigenvalues(a: Mat2) -> tuple[QuadNumber, QuadNumber]:
    """``(lam, lam^-1)`` with ``|lam| > 1`` for hyperbolic ``a`` in SL(2, Z)."""
    lam = leading_eigenvalue(a)
    return lam, a.trace() - lam


def eigenvectors_arith(a: Mat2) -> tuple[tuple[QuadNumber, QuadNumber], tuple[QuadNumber, QuadNumber]]:
    """Eigenvectors with entries in Z[sqrt(delta)], ``delta = tr(a)^2 - 4``.

    ``u`` belongs to the expanding eigenvalue, ``v`` to the contracting one.
    The primary construction is ``u = 2(a12, lam - a11)``; when ``a12 == 0``
    the transposed construction ``2(lam - a22, a21)`` is used, and a diagonal
    matrix gets ``2 e1, 2 e2``.  The eigen-equation is checked exactly.
    """
    if a.det() != 1:
        raise ValueError("eigenvectors_arith expects determinant 1")
    if abs(a.trace()) <= 2:
        raise ValueError(f"trace {a.trace()}: not semisimple hyperbolic")
    lam, lam_inv = eigenvalues(a)
    two = QuadNumber(2)
    if a.a12 != 0:
        u = (two * a.a12, two * (lam - a.a11))
        v = (two * a.a12, two * (lam_inv - a.a11))
    elif a.a21 != 0:
        u = (two * (lam - a.a22), two * a.a21)
        v = (two * (lam_inv - a.a22), two * a.a21)
    else:
        one, zero = QuadNumber(2), QuadNumber(0)
        if abs(a.a11) > 1:
            u, v = (one, zero), (zero, one)
        else:
            u, v = (zero, one), (one, zero)
    for vec, mu in ((u, lam), (v, lam_inv)):
        img = a.apply(vec)
        if img[0] != mu * vec[0] or img[1] != mu * vec[1]:
            raise ArithmeticError("eigen-equation failed; this is a bug")
    return u, v


@dataclass(frozen=True)
class EigenlineSeparation:
    """Exact separation data for the eigenlines of a hyperbolic matrix."""

    d2: QuadNumber
    det_uv: QuadNumber
    norm: NormInterval
    bound: Fraction
    holds: bool
    galois_ok: bool

    def to_json(self) -> dict:
        return {
            "d2": self.d2.to_json(),
            "d2_approx": self.d2.sci(),
            "det_uv": self.det_uv.to_json(),
            "norm": self.norm.to_json(),
            "bound": rational_str(self.bound),
            "holds": self.holds,
            "galois_ok": self.galois_ok,
        }


def eigenline_separation(a: Mat2, power: int = 30, tol=Fraction(1, 10**6)) -> EigenlineSeparation:
    """Check ``d^2([u],[v]) >= ||a||^-power`` for the arithmetic eigenvectors.

    ``||a||`` is only known inside an interval, so the comparison uses the
    lower endpoint: ``d^2 >= lower^-power`` implies the claim.  The Galois
    data of ``x = det(u, v)`` is checked alongside: ``|x sigma(x)| >= 1`` and
    ``|sigma(x)| <= upper^5``.
    """
    u, v = eigenvectors_arith(a)
    d2 = fs_distance_sq(u, v)
    norm = op_norm(a, tol)
    bound = 1 / norm.lower**power
    x = wedge(u, v)
    sx = x.conjugate()
    galois_ok = abs(x.field_norm()) >= 1 and (norm.upper**5 - abs(sx)).sign() >= 0
    return EigenlineSeparation(d2, x, norm, bound, (d2 - bound).sign() >= 0, galois_ok)


@dataclass(frozen=True)
class RationalLine:
    """The line ``n1 x + n2 y = c`` with primitive integer normal."""

    n1: int
    n2: int
    c: Fraction

    @classmethod
    def through(cls, n1, n2, c) -> "RationalLine":
        n1, n2, c = as_fraction(n1), as_fraction(n2), as_fraction(c)
        den = n1.denominator * n2.denominator
        a, b = int(n1 * den), int(n2 * den)
        c = c * den
        g = gcd(a, b)
        a, b, c = a // g, b // g, c / g
        if a < 0 or (a == 0 and b < 0):
            a, b, c = -a, -b, -c
        return cls(a, b, c)

    def contains(self, p: RationalPoint) -> bool:
        return self.n1 * p.x + self.n2 * p.y == self.c

    def some_point(self) -> RationalPoint:
        if self.n1 != 0:
            return RationalPoint(self.c / self.n1, 0)
        return RationalPoint(0, self.c / self.n2)

    def to_json(self) -> dict:
        return {"normal": [self.n1, self.n2], "offset": rational_str(self.c)}


@dataclass(frozen=True)
class FixedSet:
    kind: str  # "point", "line", "plane" or "empty"
    point: RationalPoint | None = None
    line: RationalLine | None = None

    def is_empty(self) -> bool:
        return self.kind == "empty"

    def witness(self) -> RationalPoint | None:
        if self.kind == "point":
            return self.point
        if self.kind == "line":
            return self.line.some_point()
        if self.kind == "plane":
            return RationalPoint(0, 0)
        return None

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.point is not None:
            out["point"] = self.point.to_json()
        if self.line is not None:
            out["line"] = self.line.to_json()
        return out


def fixed_point(g: AffineElement) -> FixedSet:
    """Solve ``(I - theta) x = tau`` exactly."""
    a, b, c, d, s, t = g.key()
    m11, m12, m21, m22 = 1 - a, -b, -c, 1 - d
    det = m11 * m22 - m12 * m21
    if det != 0:
        x = Fraction(s * m22 - m12 * t, det)
        y = Fraction(m11 * t - s * m21, det)
        return FixedSet("point", point=RationalPoint(x, y))
    if m11 == m12 == m21 == m22 == 0:
        return FixedSet("plane") if s == 0 and t == 0 else FixedSet("empty")
    # rank one: consistent iff the augmented matrix also has rank one
    if m11 * t - m21 * s != 0 or m12 * t - m22 * s != 0:
        return FixedSet("empty")
    if m11 != 0 or m12 != 0:
        return FixedSet("line", line=RationalLine.through(m11, m12, s))
    return FixedSet("line", line=RationalLine.through(m21, m22, t))


def unique_fixed_point(g: AffineElement) -> RationalPoint:
    fs = fixed_point(g)
    if fs.kind != "point":
        raise ValueError(f"{g.to_literal()} has no unique fixed point ({fs.kind})")
    return fs.point


def intersect(f1: FixedSet, f2: FixedSet) -> FixedSet:
    """Exact intersection of two fixed-point sets."""
    if f1.kind == "empty" or f2.kind == "empty":
        return FixedSet("empty")
    if f1.kind == "plane":
        return f2
    if f2.kind == "plane":
        return f1
    if f1.kind == "point" and f2.kind == "point":
        return f1 if f1.point == f2.point else FixedSet("empty")
    if f1.kind == "point":
        return f1 if f2.line.contains(f1.point) else FixedSet("empty")
    if f2.kind == "point":
        return f2 if f1.line.contains(f2.point) else FixedSet("empty")
    l1, l2 = f1.line, f2.line
    det = l1.n1 * l2.n2 - l1.n2 * l2.n1
    if det == 0:
        return f1 if l1 == l2 else FixedSet("empty")
    x = (l1.c * l2.n2 - l1.n2 * l2.c) / det
    y = (l1.n1 * l2.c - l1.c * l2.n1) / det
    return FixedSet("point", point=RationalPoint(x, y))
