"""Integer 2x2 matrices, special affine maps of the plane, rational points."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable

from .quadratic import as_fraction, rational_str


class Mat2:
    """A 2x2 matrix ``[[a11, a12], [a21, a22]]``.

    Entries are usually Python ints; the geometry code also builds matrices
    over Fractions or QuadNumbers, and everything here is generic over ring
    elements.
    """

    __slots__ = ("a11", "a12", "a21", "a22")

    def __init__(self, a11, a12, a21, a22):
        self.a11 = a11
        self.a12 = a12
        self.a21 = a21
        self.a22 = a22

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(1, 0, 0, 1)

    @classmethod
    def sl2(cls, a11: int, a12: int, a21: int, a22: int) -> "Mat2":
        m = cls(int(a11), int(a12), int(a21), int(a22))
        if m.det() != 1:
            raise ValueError(f"determinant {m.det()} != 1 for {m}")
        return m

    @classmethod
    def from_columns(cls, u, v) -> "Mat2":
        return cls(u[0], v[0], u[1], v[1])

    def entries(self) -> tuple:
        return (self.a11, self.a12, self.a21, self.a22)

    def det(self):
        return self.a11 * self.a22 - self.a12 * self.a21

    def trace(self):
        return self.a11 + self.a22

    def transpose(self) -> "Mat2":
        return Mat2(self.a11, self.a21, self.a12, self.a22)

    def adjugate(self) -> "Mat2":
        return Mat2(self.a22, -self.a12, -self.a21, self.a11)

    def inverse(self) -> "Mat2":
        d = self.det()
        if d == 1:
            return self.adjugate()
        if d == 0:
            raise ZeroDivisionError("singular matrix")
        if isinstance(d, int):
            d = Fraction(d)
        inv = 1 / d
        return Mat2(self.a22 * inv, -self.a12 * inv, -self.a21 * inv, self.a11 * inv)

    def __mul__(self, other):
        if isinstance(other, Mat2):
            return Mat2(
                self.a11 * other.a11 + self.a12 * other.a21,
                self.a11 * other.a12 + self.a12 * other.a22,
                self.a21 * other.a11 + self.a22 * other.a21,
                self.a21 * other.a12 + self.a22 * other.a22,
            )
        return NotImplemented

    def __pow__(self, e: int) -> "Mat2":
        if e < 0:
            return self.inverse() ** (-e)
        result = Mat2.identity()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def apply(self, v):
        return (self.a11 * v[0] + self.a12 * v[1], self.a21 * v[0] + self.a22 * v[1])

    def column(self, j: int):
        return (self.a11, self.a21) if j == 0 else (self.a12, self.a22)

    def frobenius_sq(self):
        return self.a11 * self.a11 + self.a12 * self.a12 + self.a21 * self.a21 + self.a22 * self.a22

    def __eq__(self, other):
        return isinstance(other, Mat2) and self.entries() == other.entries()

    def __hash__(self):
        return hash(self.entries())

    def __repr__(self):
        return f"Mat2({self.a11}, {self.a12}, {self.a21}, {self.a22})"

    def __str__(self):
        return f"[[{self.a11}, {self.a12}], [{self.a21}, {self.a22}]]"


class AffineElement:
    """The map ``x -> theta x + tau`` with integer ``theta`` in SL(2, Z).

    ``g * h`` is composition ``x -> g(h(x))``.  Internally a flat 6-tuple
    ``(a11, a12, a21, a22, t1, t2)`` keeps the hot loops cheap.
    """

    __slots__ = ("_k",)

    def __init__(self, linear: Mat2, translation=(0, 0), *, check: bool = True):
        k = (linear.a11, linear.a12, linear.a21, linear.a22, translation[0], translation[1])
        if check:
            if not all(isinstance(x, int) for x in k):
                raise TypeError("affine elements need integer entries")
            if k[0] * k[3] - k[1] * k[2] != 1:
                raise ValueError(f"linear part {linear} is not in SL(2, Z)")
        self._k = k

    @classmethod
    def _raw(cls, k: tuple) -> "AffineElement":
        obj = cls.__new__(cls)
        obj._k = k
        return obj

    @classmethod
    def identity(cls) -> "AffineElement":
        return cls._raw((1, 0, 0, 1, 0, 0))

    @classmethod
    def translation_by(cls, tx: int, ty: int) -> "AffineElement":
        return cls._raw((1, 0, 0, 1, int(tx), int(ty)))

    @classmethod
    def of(cls, a11, a12, a21, a22, tx=0, ty=0) -> "AffineElement":
        return cls(Mat2(a11, a12, a21, a22), (tx, ty))

    @property
    def linear(self) -> Mat2:
        k = self._k
        return Mat2(k[0], k[1], k[2], k[3])

    @property
    def translation(self) -> tuple[int, int]:
        return (self._k[4], self._k[5])

    def key(self) -> tuple:
        return self._k

    def iota(self) -> tuple[tuple[int, int, int], ...]:
        k = self._k
        return ((k[0], k[1], k[4]), (k[2], k[3], k[5]), (0, 0, 1))

    def order_key(self) -> tuple:
        """Row-major entries of the 3x3 embedding, used for tie-breaking."""
        k = self._k
        return (k[0], k[1], k[4], k[2], k[3], k[5])

    def trace(self) -> int:
        return self._k[0] + self._k[3]

    def is_identity(self) -> bool:
        return self._k == (1, 0, 0, 1, 0, 0)

    def __mul__(self, other: "AffineElement") -> "AffineElement":
        a, b, c, d, s, t = self._k
        e, f, g, h, u, v = other._k
        return AffineElement._raw(
            (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h, a * u + b * v + s, c * u + d * v + t)
        )

    def inverse(self) -> "AffineElement":
        a, b, c, d, s, t = self._k
        return AffineElement._raw((d, -b, -c, a, -(d * s - b * t), -(-c * s + a * t)))

    def __pow__(self, e: int) -> "AffineElement":
        if e < 0:
            return self.inverse() ** (-e)
        result = AffineElement.identity()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def conjugate_by(self, gamma: Mat2) -> "AffineElement":
        """``gamma g gamma^-1`` with ``gamma`` acting linearly."""
        gm = AffineElement(gamma)
        return gm * self * gm.inverse()

    def apply(self, point: "RationalPoint") -> "RationalPoint":
        a, b, c, d, s, t = self._k
        x, y = point.x, point.y
        return RationalPoint(a * x + b * y + s, c * x + d * y + t)

    def apply_scaled(self, X: int, Y: int, D: int) -> tuple[int, int]:
        """Image of the point ``(X/D, Y/D)``, returned as numerators over ``D``."""
        a, b, c, d, s, t = self._k
        return (a * X + b * Y + s * D, c * X + d * Y + t * D)

    def __eq__(self, other):
        return isinstance(other, AffineElement) and self._k == other._k

    def __hash__(self):
        return hash(self._k)

    def __repr__(self):
        return f"AffineElement({self.to_literal()!r})"

    def to_literal(self) -> str:
        a, b, c, d, s, t = self._k
        return f"{a} {b} {c} {d} | {s} {t}"


@dataclass(frozen=True)
class RationalPoint:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", as_fraction(self.x))
        object.__setattr__(self, "y", as_fraction(self.y))

    def __sub__(self, other: "RationalPoint") -> tuple[Fraction, Fraction]:
        return (self.x - other.x, self.y - other.y)

    def as_tuple(self) -> tuple[Fraction, Fraction]:
        return (self.x, self.y)

    def scaled(self) -> tuple[int, int, int]:
        """``(X, Y, D)`` with ``D > 0`` the common denominator."""
        D = lcm(self.x.denominator, self.y.denominator)
        return (self.x.numerator * (D // self.x.denominator), self.y.numerator * (D // self.y.denominator), D)

    @classmethod
    def from_scaled(cls, X: int, Y: int, D: int) -> "RationalPoint":
        return cls(Fraction(X, D), Fraction(Y, D))

    def to_json(self) -> list[str]:
        return [rational_str(self.x), rational_str(self.y)]

    @classmethod
    def from_json(cls, data) -> "RationalPoint":
        return cls(Fraction(data[0]), Fraction(data[1]))

    def __str__(self):
        return f"({self.x}, {self.y})"


def symmetrize(elements: Iterable[AffineElement]) -> tuple[list[AffineElement], bool]:
    """Close a list under inverses and add the identity; keeps first-seen order.

    Returns the symmetric list and whether anything had to be added.
    """
    elements = list(elements)
    given = {g.key() for g in elements}
    out: list[AffineElement] = []
    seen: set = set()
    added = False
    for g in [AffineElement.identity()] + elements:
        for x in (g, g.inverse()):
            if x.key() not in seen:
                seen.add(x.key())
                out.append(x)
                added = added or x.key() not in given
    return out, added
