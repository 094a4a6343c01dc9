"""Exact arithmetic in real quadratic fields Q(sqrt(d)).

A :class:`QuadNumber` is ``p + q*sqrt(delta)`` with rational ``p``, ``q`` and a
squarefree radicand ``delta > 1``.  Rational numbers are represented with
``delta == 1`` and ``q == 0`` and mix freely with every field.  Signs are
decided exactly by comparing ``p**2`` with ``q**2 * delta``.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from math import isqrt

from ..errors import IncompatibleFieldError

Rational = Fraction


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def rational_str(x) -> str:
    x = as_fraction(x)
    return f"{x.numerator}/{x.denominator}"


@functools.lru_cache(maxsize=4096)
def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(k, d)`` with ``n == k*k*d``.

    Trial division runs up to 10**6; a leftover cofactor is kept whole unless
    it is a perfect square.
    """
    if n <= 0:
        raise ValueError("radicand must be positive")
    k, d = 1, 1
    m = n
    p = 2
    while p * p <= m and p <= 1_000_000:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            k *= p ** (e // 2)
            if e % 2:
                d *= p
        p += 1 if p == 2 else 2
    if m > 1:
        r = isqrt(m)
        if r * r == m:
            k *= r
        else:
            d *= m
    return k, d


def sign_int_sqrt(a: int, b: int, delta: int) -> int:
    """Sign of ``a + b*sqrt(delta)`` for integers, ``delta >= 0``."""
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sb == 0 or delta == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    lhs = a * a
    rhs = b * b * delta
    if lhs > rhs:
        return sa
    if lhs < rhs:
        return sb
    return 0


@functools.total_ordering
class QuadNumber:
    __slots__ = ("p", "q", "delta")

    def __init__(self, p=0, q=0, delta: int = 1):
        p = as_fraction(p)
        q = as_fraction(q)
        delta = int(delta)
        if q == 0 or delta == 1:
            if delta == 1:
                p = p + q
            q = Fraction(0)
            delta = 1
        else:
            k, d = squarefree_split(delta)
            q = q * k
            delta = d
            if delta == 1:
                p, q = p + q, Fraction(0)
        self.p = p
        self.q = q
        self.delta = delta

    @classmethod
    def sqrt_of(cls, n: int) -> "QuadNumber":
        return cls(0, 1, n)

    @classmethod
    def coerce(cls, x) -> "QuadNumber":
        if isinstance(x, QuadNumber):
            return x
        return cls(as_fraction(x))

    # field bookkeeping
    def is_rational(self) -> bool:
        return self.q == 0

    def _common(self, other: "QuadNumber") -> int:
        if self.delta == 1:
            return other.delta
        if other.delta == 1 or other.delta == self.delta:
            return self.delta
        raise IncompatibleFieldError(
            f"sqrt({self.delta}) and sqrt({other.delta}) live in different fields"
        )

    # ring operations
    def __add__(self, other):
        try:
            other = QuadNumber.coerce(other)
        except TypeError:
            return NotImplemented
        d = self._common(other)
        return QuadNumber(self.p + other.p, self.q + other.q, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadNumber(-self.p, -self.q, self.delta)

    def __sub__(self, other):
        try:
            other = QuadNumber.coerce(other)
        except TypeError:
            return NotImplemented
        d = self._common(other)
        return QuadNumber(self.p - other.p, self.q - other.q, d)

    def __rsub__(self, other):
        return QuadNumber.coerce(other) - self

    def __mul__(self, other):
        try:
            other = QuadNumber.coerce(other)
        except TypeError:
            return NotImplemented
        d = self._common(other)
        return QuadNumber(
            self.p * other.p + self.q * other.q * d,
            self.p * other.q + self.q * other.p,
            d,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "QuadNumber":
        """Galois conjugate ``p - q*sqrt(delta)``."""
        return QuadNumber(self.p, -self.q, self.delta)

    def field_norm(self) -> Fraction:
        """``x * conjugate(x)``, always rational."""
        return self.p * self.p - self.q * self.q * self.delta

    def inverse(self) -> "QuadNumber":
        n = self.field_norm()
        if n == 0:
            raise ZeroDivisionError("QuadNumber division by zero")
        return QuadNumber(self.p / n, -self.q / n, self.delta)

    def __truediv__(self, other):
        try:
            other = QuadNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return QuadNumber.coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = QuadNumber(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # order
    def sign(self) -> int:
        p, q = self.p, self.q
        sp = (p > 0) - (p < 0)
        sq = (q > 0) - (q < 0)
        if sq == 0:
            return sp
        if sp == 0 or sp == sq:
            return sq
        lhs = p * p
        rhs = q * q * self.delta
        if lhs > rhs:
            return sp
        if lhs < rhs:
            return sq
        return 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __eq__(self, other):
        try:
            other = QuadNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return self.p == other.p and self.q == other.q and (self.q == 0 or self.delta == other.delta)

    def __lt__(self, other):
        try:
            other = QuadNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return (self - other).sign() < 0

    def __hash__(self):
        if self.q == 0:
            return hash(self.p)
        return hash((self.p, self.q, self.delta))

    def __bool__(self):
        return bool(self.p) or bool(self.q)

    # approximations
    def enclose(self, bits: int = 64) -> tuple[Fraction, Fraction]:
        """Rational ``(lo, hi)`` with ``lo <= self <= hi`` and width about 2**-bits * |q|."""
        if self.q == 0:
            return self.p, self.p
        scale = 1 << (2 * bits)
        r = isqrt(self.delta * scale)
        lo_root = Fraction(r, 1 << bits)
        hi_root = Fraction(r + 1, 1 << bits)
        if self.q > 0:
            return self.p + self.q * lo_root, self.p + self.q * hi_root
        return self.p + self.q * hi_root, self.p + self.q * lo_root

    def __float__(self):
        lo, hi = self.enclose(80)
        return float((lo + hi) / 2)

    def sci(self, digits: int = 6) -> str:
        """Scientific notation that works far outside the float range."""
        lo, hi = self.enclose(80)
        m = (lo + hi) / 2
        if m == 0:
            return f"{0:.{digits}e}"
        sign = "-" if m < 0 else ""
        x = abs(m)
        e = len(str(x.numerator)) - len(str(x.denominator))
        x = x / Fraction(10) ** e
        while x >= 10:
            x, e = x / 10, e + 1
        while x < 1:
            x, e = x * 10, e - 1
        mant = f"{float(x):.{digits}f}"
        if mant.startswith("10"):
            mant, e = f"{1:.{digits}f}", e + 1
        return f"{sign}{mant}e{e:+03d}"

    def __repr__(self):
        if self.q == 0:
            return f"QuadNumber({self.p})"
        return f"QuadNumber({self.p} + {self.q}*sqrt({self.delta}))"

    def __str__(self):
        if self.q == 0:
            return str(self.p)
        sign = "+" if self.q > 0 else "-"
        return f"{self.p} {sign} {abs(self.q)}*sqrt({self.delta})"

    # serialization
    def to_json(self) -> dict:
        return {"p": rational_str(self.p), "q": rational_str(self.q), "delta": self.delta}

    @classmethod
    def from_json(cls, data) -> "QuadNumber":
        if isinstance(data, (str, int)):
            return cls(Fraction(data))
        return cls(Fraction(data["p"]), Fraction(data["q"]), int(data["delta"]))


def sqrt_bounds(x: Fraction, bits: int = 64) -> tuple[Fraction, Fraction]:
    """Rational bounds ``lo <= sqrt(x) <= hi`` for a non-negative rational."""
    x = as_fraction(x)
    if x < 0:
        raise ValueError("square root of a negative number")
    if x == 0:
        return Fraction(0), Fraction(0)
    scale = 1 << (2 * bits)
    num = x.numerator * scale
    den = x.denominator
    # sqrt(num/den) = sqrt(num*den)/den
    r = isqrt(num * den)
    lo = Fraction(r, den << bits)
    hi = Fraction(r + 1, den << bits)
    return lo, hi
