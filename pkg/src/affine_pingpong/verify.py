"""Brute-force validation of a certified pair.

Freeness and local commutativity are checked on every reduced word up to a
length cap.  The ping-pong table is checked by sampling: rational points are
classified exactly against the certificate's sets and pushed through every
short reduced word.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Iterator, Sequence

from .arith import (
    PAIR_ALPHABET,
    AffineElement,
    FixedSet,
    Mat2,
    QuadNumber,
    RationalPoint,
    WordPath,
    fixed_point,
    intersect,
    inverse_letter,
    sign_int_sqrt,
)
from .errors import BudgetExceeded
from .pingpong.certify import FreePairCertificate
from .pingpong.table import DiagonalFrame, TableParams

DEFAULT_WORD_CAP = 12
DEFAULT_FREE_LENGTH = 8
DEFAULT_LC_LENGTH = 6
MAX_LISTED = 50


def pair_images(a: AffineElement, b: AffineElement) -> tuple[AffineElement, ...]:
    """Letter images in alphabet order ``a, a^-1, b, b^-1``."""
    return (a, a.inverse(), b, b.inverse())


def enumerate_reduced(
    L: int, a: AffineElement | None = None, b: AffineElement | None = None, cap: int = DEFAULT_WORD_CAP
) -> Iterator[WordPath]:
    """All nonempty reduced words of length ``<= L``, by length then lexicographically.

    Without a pair the evaluated element is the identity placeholder; the
    count per length is ``4 * 3^(n-1)``.
    """
    if L > cap:
        raise BudgetExceeded(f"word length {L} exceeds the cap {cap}")
    if L < 1:
        return
    ident = AffineElement.identity()
    images = pair_images(a, b) if a is not None and b is not None else (ident,) * 4
    layer = [WordPath((x,), images[x]) for x in range(4)]
    for n in range(1, L + 1):
        yield from layer
        if n == L:
            break
        nxt = []
        for w in layer:
            bad = inverse_letter(w.last)
            for x in range(4):
                if x != bad:
                    nxt.append(WordPath(w.letters + (x,), w.evaluated * images[x]))
        layer = nxt


def word_text(letters: Sequence[int]) -> str:
    return " ".join(PAIR_ALPHABET[x] for x in letters) if letters else "1"


# --- freeness and local commutativity ----------------------------------------


@dataclass
class FreenessReport:
    length: int
    words_checked: int
    counterexample: WordPath | None = None

    @property
    def ok(self) -> bool:
        return self.counterexample is None

    def to_json(self) -> dict:
        return {
            "check": "freeness",
            "max_length": self.length,
            "words_checked": self.words_checked,
            "pass": self.ok,
            "counterexample": None if self.ok else word_text(self.counterexample.letters),
        }


def freeness_check(a: AffineElement, b: AffineElement, L: int = DEFAULT_FREE_LENGTH, cap: int = DEFAULT_WORD_CAP) -> FreenessReport:
    """First reduced word (length, then lexicographic) that evaluates to the identity."""
    count = 0
    for w in enumerate_reduced(L, a, b, cap):
        count += 1
        if w.evaluated.is_identity():
            return FreenessReport(L, count, w)
    return FreenessReport(L, count)


@dataclass
class CommutativityReport:
    length: int
    words_checked: int
    pairs_with_common_fixed_set: int
    counterexamples: list = field(default_factory=list)
    identity_words: int = 0

    @property
    def ok(self) -> bool:
        return not self.counterexamples and self.identity_words == 0

    def to_json(self) -> dict:
        return {
            "check": "local_commutativity",
            "max_length": self.length,
            "words_checked": self.words_checked,
            "pairs_with_common_fixed_set": self.pairs_with_common_fixed_set,
            "identity_words": self.identity_words,
            "pass": self.ok,
            "counterexamples": [
                {"w1": word_text(w1.letters), "w2": word_text(w2.letters), "common": fs.to_json()}
                for w1, w2, fs in self.counterexamples[:MAX_LISTED]
            ],
            "counterexample_count": len(self.counterexamples),
        }


def local_commutativity_check(
    a: AffineElement, b: AffineElement, L: int = DEFAULT_LC_LENGTH, cap: int = DEFAULT_WORD_CAP
) -> CommutativityReport:
    """Every two non-commuting words of length ``<= L`` have disjoint fixed sets.

    Words with a unique fixed point are bucketed by that point, so only pairs
    in one bucket and pairs involving a fixed line are compared.
    """
    by_point: dict[RationalPoint, list[WordPath]] = defaultdict(list)
    lines: list[tuple[WordPath, FixedSet]] = []
    count = identity = 0
    for w in enumerate_reduced(L, a, b, cap):
        count += 1
        fs = fixed_point(w.evaluated)
        if fs.kind == "point":
            by_point[fs.point].append(w)
        elif fs.kind == "line":
            lines.append((w, fs))
        elif fs.kind == "plane":
            identity += 1

    shared = 0
    bad: list = []

    def visit(w1: WordPath, w2: WordPath, common: FixedSet) -> None:
        nonlocal shared
        shared += 1
        g1, g2 = w1.evaluated, w2.evaluated
        if g1 * g2 != g2 * g1:
            bad.append((w1, w2, common))

    for point, words in by_point.items():
        fs = FixedSet("point", point=point)
        for w1, w2 in combinations(words, 2):
            visit(w1, w2, fs)
    for i, (w1, f1) in enumerate(lines):
        for w2, f2 in lines[i + 1 :]:
            common = intersect(f1, f2)
            if not common.is_empty():
                visit(w1, w2, common)
        for point, words in by_point.items():
            if f1.line.contains(point):
                for w2 in words:
                    visit(w1, w2, FixedSet("point", point=point))
    bad.sort(key=lambda t: (len(t[0]), t[0].letters, len(t[1]), t[1].letters))
    return CommutativityReport(L, count, shared, bad, identity)


# --- ping-pong table sampling --------------------------------------------------


def _integer_frame(g_inv: Mat2) -> tuple[list[tuple[int, int]], int, int]:
    """``K g^-1 = M`` with entries ``P + Q sqrt(delta)``, ``P, Q`` integers."""
    entries = [QuadNumber.coerce(x) for x in g_inv.entries()]
    delta = 1
    for x in entries:
        if x.q != 0:
            delta = x.delta
    K = 1
    for x in entries:
        K = lcm(K, x.p.denominator, x.q.denominator)
    M = [(int(x.p * K), int(x.q * K)) for x in entries]
    return M, K, delta


class TableGeometry:
    """Exact membership tests for the certificate's ping-pong sets.

    Points are kept as integer triples ``(X, Y, D)`` meaning ``(X/D, Y/D)``
    in reduced coordinates; integral affine maps never change ``D``.  The
    frame coordinates ``g^-1 (x - phi(a))`` are ``M (x - phi(a)) / K`` with
    ``M`` over ``Z[sqrt(delta)]``.  The sets for ``b`` are the images under
    ``h`` of those for ``a``.
    """

    def __init__(self, conjugator: Mat2, a: AffineElement, h: AffineElement, ell: int, params: TableParams, pythagorean):
        self.gamma = AffineElement(conjugator)
        self.gamma_inv = self.gamma.inverse()
        frame = DiagonalFrame(a, h, pythagorean)
        self.frame = frame
        self.params = params
        self.A = a**ell
        self.h = h
        self.h_inv = h.inverse()
        B = h * self.A * self.h_inv
        self.reduced_images = (self.A, self.A.inverse(), B, B.inverse())
        self.images = tuple(g.conjugate_by(conjugator.adjugate()) for g in self.reduced_images)
        px, py = frame.phi_a.x, frame.phi_a.y
        self.pd = lcm(px.denominator, py.denominator)
        self.px, self.py = int(px * self.pd), int(py * self.pd)
        self.M, self.K, self.delta = _integer_frame(frame.g_inv)
        eps = Fraction(params.eps1)
        self.cone_n2, self.cone_m2 = eps.numerator**2, eps.denominator**2
        self.r_in = Fraction(params.delta1) ** 2
        self.r_out = Fraction(params.R1) ** 2

    # frame coordinates as pairs (P, Q) meaning P + Q sqrt(delta)
    def _frame_coords(self, X: int, Y: int, D: int):
        u = X * self.pd - self.px * D
        v = Y * self.pd - self.py * D
        (p11, q11), (p12, q12), (p21, q21), (p22, q22) = self.M
        return (p11 * u + p12 * v, q11 * u + q12 * v), (p21 * u + p22 * v, q21 * u + q22 * v)

    def _square(self, c) -> tuple[int, int]:
        p, q = c
        return p * p + self.delta * q * q, 2 * p * q

    def _sign(self, A: int, B: int) -> int:
        return sign_int_sqrt(A, B, self.delta) if self.delta != 1 else (A + B > 0) - (A + B < 0)

    def frame_norm_sq(self, X: int, Y: int, D: int) -> tuple[int, int, int]:
        """``(A, B, S)`` with ``||x'||^2 = (A + B sqrt(delta)) / S``."""
        s1, s2 = self._squares(X, Y, D)
        return s1[0] + s2[0], s1[1] + s2[1], (self.K * D * self.pd) ** 2

    def _squares(self, X: int, Y: int, D: int):
        c1, c2 = self._frame_coords(X, Y, D)
        return self._square(c1), self._square(c2)

    def _in_cone(self, s1, s2, axis: int) -> bool:
        near, far = (s1, s2) if axis == 0 else (s2, s1)
        k = self.cone_m2 - self.cone_n2
        return self._sign(k * far[0] - self.cone_n2 * near[0], k * far[1] - self.cone_n2 * near[1]) <= 0

    def _ball_cmp(self, s1, s2, D: int, r2: Fraction) -> int:
        scale = (self.K * D * self.pd) ** 2
        A, B = s1[0] + s2[0], s1[1] + s2[1]
        return self._sign(r2.denominator * A - r2.numerator * scale, r2.denominator * B)

    def _a_plus(self, s1, s2, D: int, inverse: bool) -> bool:
        return self._in_cone(s1, s2, 1 if inverse else 0) and self._ball_cmp(s1, s2, D, self.r_out) > 0

    def _a_minus(self, s1, s2, D: int, inverse: bool) -> bool:
        return self._in_cone(s1, s2, 0 if inverse else 1) or self._ball_cmp(s1, s2, D, self.r_in) <= 0

    def _letter_squares(self, letter: int, X: int, Y: int, D: int):
        if letter >= 2:
            X, Y = self.h_inv.apply_scaled(X, Y, D)
        return self._squares(X, Y, D)

    def membership(self, letter: int, X: int, Y: int, D: int) -> tuple[bool, bool]:
        """``(x in U+_letter, x in U-_letter)`` for a reduced-coordinate point."""
        s1, s2 = self._letter_squares(letter, X, Y, D)
        inv = bool(letter & 1)
        return self._a_plus(s1, s2, D, inv), self._a_minus(s1, s2, D, inv)

    def in_plus(self, letter: int, X: int, Y: int, D: int, squares=None) -> bool:
        if squares is None or letter >= 2:
            squares = self._letter_squares(letter, X, Y, D)
        return self._a_plus(*squares, D, bool(letter & 1))

    def f_greater(self, Xw: int, Yw: int, Xx: int, Yx: int, D: int) -> bool:
        A1, B1, _ = self.frame_norm_sq(Xw, Yw, D)
        A0, B0, _ = self.frame_norm_sq(Xx, Yx, D)
        return self._sign(A1 - A0, B1 - B0) > 0

    def to_reduced(self, p: RationalPoint) -> tuple[int, int, int]:
        X, Y, D = p.scaled()
        X, Y = self.gamma.apply_scaled(X, Y, D)
        return X, Y, D


def table_geometry(cert: FreePairCertificate) -> TableGeometry:
    return TableGeometry(cert.conjugator, cert.a, cert.h, cert.ell, cert.params, cert.pythagorean)


def default_sample_points(seed: int = 0, grid: int = 33, extra: int = 200, half_width: int = 10) -> list[RationalPoint]:
    """A ``grid x grid`` lattice on ``[-w, w]^2`` plus seeded random rationals."""
    pts = []
    step = Fraction(2 * half_width, grid - 1)
    for i in range(grid):
        for j in range(grid):
            pts.append(RationalPoint(-half_width + i * step, -half_width + j * step))
    rng = random.Random(seed)
    for _ in range(extra):
        q1, q2 = rng.randint(1, 997), rng.randint(1, 997)
        x = Fraction(rng.randint(-half_width * q1, half_width * q1), q1)
        y = Fraction(rng.randint(-half_width * q2, half_width * q2), q2)
        pts.append(RationalPoint(x, y))
    return pts


@dataclass
class TableSampleReport:
    points: int
    max_length: int
    word_applications: int = 0
    exempt: int = 0
    containment_violations: list = field(default_factory=list)
    dilation_violations: list = field(default_factory=list)
    triple_overlaps: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.containment_violations or self.dilation_violations or self.triple_overlaps)

    def to_json(self) -> dict:
        def listed(items):
            return [{"point": p.to_json(), "word": word_text(w)} for p, w in items[:MAX_LISTED]]

        return {
            "check": "table_sampling",
            "points": self.points,
            "max_length": self.max_length,
            "word_applications": self.word_applications,
            "exempt": self.exempt,
            "containment_violations": len(self.containment_violations),
            "dilation_violations": len(self.dilation_violations),
            "triple_overlaps": len(self.triple_overlaps),
            "examples": {
                "containment": listed(self.containment_violations),
                "dilation": listed(self.dilation_violations),
                "triple": [{"point": p.to_json(), "letters": word_text(ls)} for p, ls in self.triple_overlaps[:MAX_LISTED]],
            },
            "pass": self.ok,
        }


def table_invariant_sample(
    cert: FreePairCertificate | TableGeometry, points: Sequence[RationalPoint], L: int = 4
) -> TableSampleReport:
    """Check ``w(x) in U+_First(w)`` and ``f(w x) > f(x)`` for ``x`` outside ``U-_Last(w)``.

    ``f`` is the distance to ``phi(a)`` measured in the diagonal frame.
    Words are grown by prepending letters, so each image costs one affine
    application.  Also records points lying in three of the four ``U-`` sets.
    """
    geo = cert if isinstance(cert, TableGeometry) else table_geometry(cert)
    report = TableSampleReport(len(points), L)
    images = geo.reduced_images
    for p in points:
        X, Y, D = geo.to_reduced(p)
        f0 = geo.frame_norm_sq(X, Y, D)
        members = [geo.membership(s, X, Y, D) for s in range(4)]
        minus = [s for s in range(4) if members[s][1]]
        if len(minus) >= 3:
            report.triple_overlaps.append((p, tuple(minus)))
        for last in range(4):
            if members[last][1]:
                report.exempt += 1
                continue
            # stack of (letters, first letter image) grown on the left
            stack = [((last,), images[last].apply_scaled(X, Y, D))]
            while stack:
                letters, (Xw, Yw) = stack.pop()
                report.word_applications += 1
                first = letters[0]
                sq = geo._squares(Xw, Yw, D)
                if not geo.in_plus(first, Xw, Yw, D, sq):
                    report.containment_violations.append((p, letters))
                fw = (sq[0][0] + sq[1][0] - f0[0], sq[0][1] + sq[1][1] - f0[1])
                if geo._sign(*fw) <= 0:
                    report.dilation_violations.append((p, letters))
                if len(letters) < L:
                    banned = inverse_letter(first)
                    for s in range(3, -1, -1):
                        if s != banned:
                            stack.append(((s,) + letters, images[s].apply_scaled(Xw, Yw, D)))
    return report


# --- combined report -------------------------------------------------------------


def validation_report(
    a: AffineElement,
    b: AffineElement,
    free_length: int = DEFAULT_FREE_LENGTH,
    lc_length: int = DEFAULT_LC_LENGTH,
    cert: FreePairCertificate | TableGeometry | None = None,
    points: Sequence[RationalPoint] | None = None,
    sample_length: int = 4,
    cap: int = DEFAULT_WORD_CAP,
) -> dict:
    """Run every applicable check and collect a pass/fail document."""
    free = freeness_check(a, b, free_length, cap)
    checks = [free.to_json()]
    if free.ok:
        checks.append(local_commutativity_check(a, b, lc_length, cap).to_json())
    else:
        checks.append({"check": "local_commutativity", "pass": False, "skipped": "pair is not free"})
    if cert is not None:
        pts = points if points is not None else default_sample_points()
        checks.append(table_invariant_sample(cert, pts, sample_length).to_json())
    return {
        "pair": {"a": a.to_literal(), "b": b.to_literal()},
        "checks": checks,
        "pass": all(c["pass"] for c in checks),
    }
