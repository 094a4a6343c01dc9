"""Four-piece paradoxical decomposition on explored free orbits, and the
non-amenability constants it implies for finitely supported measures."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .arith import PAIR_ALPHABET, AffineElement, RationalPoint, inverse_letter, rational_str
from .errors import HypothesisError
from .verify import pair_images, word_text

A, A_INV, B, B_INV = range(4)
AFFINE_CONSTANT = Fraction(1, 4)
LINEAR_CONSTANT = Fraction(1, 2)


@dataclass
class OrbitRecord:
    """Ball of radius ``radius`` around ``representative`` in one orbit.

    Points are stored as integer numerators over the common denominator
    ``denominator``; ``words[i]`` is the first word in (length, lex) order
    with ``words[i] . representative = point i``.
    """

    representative: RationalPoint
    radius: int
    denominator: int
    coords: list
    words: list
    stabilizer: tuple | None = None
    merged_seeds: list = field(default_factory=list)
    index: dict = field(default_factory=dict, repr=False)

    @property
    def free(self) -> bool:
        return self.stabilizer is None

    @property
    def status(self) -> str:
        if self.free:
            return f"free-up-to-{self.radius}"
        w1, w2 = self.stabilizer
        return f"stabilized({word_text(_inverse(w1) + w2)})"

    def point(self, i: int) -> RationalPoint:
        X, Y = self.coords[i]
        return RationalPoint(Fraction(X, self.denominator), Fraction(Y, self.denominator))

    @property
    def members(self) -> list[tuple[RationalPoint, tuple]]:
        return [(self.point(i), w) for i, w in enumerate(self.words)]

    def __len__(self) -> int:
        return len(self.words)

    def to_json(self, with_members: bool = False) -> dict:
        out = {
            "representative": self.representative.to_json(),
            "radius": self.radius,
            "size": len(self),
            "status": self.status,
            "merged_seeds": [p.to_json() for p in self.merged_seeds],
        }
        if with_members:
            out["members"] = [{"point": p.to_json(), "word": word_text(w)} for p, w in self.members]
        return out


def _inverse(letters: Sequence[int]) -> tuple:
    return tuple(inverse_letter(x) for x in reversed(letters))


def _explore(images, seed: RationalPoint, L: int, taken: dict) -> tuple[OrbitRecord | None, int | None]:
    """BFS by prepending letters; stops early when ``taken`` (other orbits) is hit."""
    D = lcm(seed.x.denominator, seed.y.denominator)
    start = (int(seed.x * D), int(seed.y * D))
    hit = taken.get((D, start))
    if hit is not None:
        return None, hit
    rec = OrbitRecord(seed, L, D, [start], [()])
    rec.index[start] = 0
    layer = [0]
    for _ in range(L):
        nxt = []
        for s in range(4):
            g = images[s]
            for i in layer:
                w = rec.words[i]
                if w and s == inverse_letter(w[0]):
                    continue
                pt = g.apply_scaled(*rec.coords[i], D)
                j = rec.index.get(pt)
                if j is not None:
                    rec.stabilizer = (rec.words[j], (s,) + w)
                    return rec, None
                other = taken.get((D, pt))
                if other is not None:
                    return None, other
                rec.index[pt] = len(rec.words)
                rec.coords.append(pt)
                rec.words.append((s,) + w)
                nxt.append(len(rec.words) - 1)
        layer = nxt
    return rec, None


def orbit_decompose(a: AffineElement, b: AffineElement, seeds: Sequence[RationalPoint], L: int) -> list[OrbitRecord]:
    """Explore each seed's orbit to word length ``L``; seeds meeting an earlier ball are merged."""
    images = pair_images(a, b)
    records: list[OrbitRecord] = []
    taken: dict = {}
    for seed in seeds:
        rec, other = _explore(images, seed, L, taken)
        if rec is None:
            records[other].merged_seeds.append(seed)
            continue
        for pt in rec.coords:
            taken[(rec.denominator, pt)] = len(records)
        records.append(rec)
    return records


def piece_of(word: Sequence[int]) -> int:
    """Piece index 1..4 of a reduced word.

    Pieces 1 and 2 split the words starting with ``a`` and ``a^-1``; the
    identity and the positive powers of ``a`` are moved into piece 2 so that
    ``A1 u a A2`` and ``A3 u b A4`` are both the whole group.
    """
    if not word or all(x == A for x in word):
        return 2
    return {A: 1, A_INV: 2, B: 3, B_INV: 4}[word[0]]


COVERS = ((("1", 1), ("a", 2)), (("1", 3), ("b", 4)))


@dataclass
class PieceAssignment:
    pieces: list
    covers: tuple
    interior: int
    cover_hits: list
    disjoint: bool
    leakage: Fraction
    ball: int

    @property
    def covers_exact(self) -> list[bool]:
        return [all(h == 1 for h in hits.values()) for hits in self.cover_hits]

    @property
    def ok(self) -> bool:
        return self.disjoint and all(self.covers_exact)

    def to_json(self) -> dict:
        return {
            "piece_sizes": [len(p) for p in self.pieces],
            "disjoint": self.disjoint,
            "covers": [
                {
                    "union": " u ".join(f"{g}.A{i}" for g, i in cover),
                    "interior_points": len(hits),
                    "hit_exactly_once": sum(1 for h in hits.values() if h == 1),
                    "exact": exact,
                }
                for cover, hits, exact in zip(self.covers, self.cover_hits, self.covers_exact)
            ],
            "interior": self.interior,
            "ball": self.ball,
            "leakage": rational_str(self.leakage),
            "leakage_approx": float(self.leakage),
            "pass": self.ok,
        }


def dekker_pieces(orbits: Sequence[OrbitRecord], a: AffineElement, b: AffineElement) -> PieceAssignment:
    """Assign explored points to four pieces and check both covers on the interior.

    A point is interior when its canonical word is shorter than the radius,
    so every preimage needed by a cover is inside the explored ball.
    """
    for rec in orbits:
        if not rec.free:
            raise HypothesisError(f"orbit of {rec.representative} is {rec.status}; only free orbits can be split")
    pieces: list[list] = [[], [], [], []]
    for k, rec in enumerate(orbits):
        for i, w in enumerate(rec.words):
            pieces[piece_of(w) - 1].append((k, i))
    seen: set = set()
    disjoint = True
    for piece in pieces:
        for m in piece:
            if m in seen:
                disjoint = False
            seen.add(m)
    mult = {"1": None, "a": a, "b": b}
    hits_all = []
    interior = [(k, i) for k, rec in enumerate(orbits) for i, w in enumerate(rec.words) if len(w) < rec.radius]
    for cover in COVERS:
        hits = {m: 0 for m in interior}
        for g_name, idx in cover:
            g = mult[g_name]
            for k, i in pieces[idx - 1]:
                rec = orbits[k]
                pt = rec.coords[i] if g is None else g.apply_scaled(*rec.coords[i], rec.denominator)
                j = rec.index.get(pt)
                if j is not None and (k, j) in hits:
                    hits[(k, j)] += 1
        hits_all.append(hits)
    ball = sum(len(r) for r in orbits)
    leakage = Fraction(ball - len(interior), ball) if ball else Fraction(0)
    return PieceAssignment(pieces, COVERS, len(interior), hits_all, disjoint, leakage, ball)


# --- measures on the explored sample ---------------------------------------------


def _apply_word(images, letters: Sequence[int], pt, D):
    for s in reversed(letters):
        pt = images[s].apply_scaled(*pt, D)
    return pt


def displacement(orbits: Sequence[OrbitRecord], images, letters: Sequence[int]) -> Fraction:
    """``||g_* mu - mu||`` for the uniform measure ``mu`` on the explored balls.

    The norm is ``sup_E |nu(E)|``; for a uniform measure on a finite set
    ``F`` it equals ``|gF \\ F| / |F|``.
    """
    total = sum(len(r) for r in orbits)
    if not total:
        return Fraction(0)
    moved = 0
    for rec in orbits:
        for pt in rec.coords:
            if _apply_word(images, letters, pt, rec.denominator) not in rec.index:
                moved += 1
    return Fraction(moved, total)


def _words_up_to(n: int) -> list[tuple]:
    out = [()]
    layer = [()]
    for _ in range(n):
        layer = [w + (x,) for w in layer for x in range(4) if not w or x != inverse_letter(w[-1])]
        out += layer
    return out


def point_mass_displacement(images, point: RationalPoint, letters: Sequence[int]) -> int:
    D = lcm(point.x.denominator, point.y.denominator)
    pt = (int(point.x * D), int(point.y * D))
    return int(_apply_word(images, letters, pt, D) != pt)


def nonamenability_report(
    a: AffineElement,
    b: AffineElement,
    orbits: Sequence[OrbitRecord],
    assignment: PieceAssignment,
    fixed_point_a: RationalPoint | None = None,
    max_steps: int = 3,
) -> dict:
    """Implied non-amenability constants and the finite data behind them.

    For the uniform measure on the explored balls the cover identities give
    ``2 mu(interior) <= sum_i mu(g_i A_i) <= 1 + 4 sup_g ||g_* mu - mu||``,
    so the measured displacement must reach ``(2 mu(interior) - 1) / 4``.
    """
    images = pair_images(a, b)
    disp = {PAIR_ALPHABET[s]: displacement(orbits, images, (s,)) for s in range(4)}
    sup_one = max(disp.values()) if disp else Fraction(0)
    mu_int = 1 - assignment.leakage if assignment.ball else Fraction(0)
    chain = (2 * mu_int - 1) / 4
    steps = []
    for n in range(1, max_steps + 1):
        sup_n = max(displacement(orbits, images, w) for w in _words_up_to(n))
        steps.append(
            {"N": n, "sup_over_S^N": rational_str(sup_n), "N_times_sup_over_S": rational_str(n * sup_one), "holds": sup_n <= n * sup_one}
        )
    out = {
        "affine_constant": rational_str(AFFINE_CONSTANT),
        "linear_constant": rational_str(LINEAR_CONSTANT),
        "uniform_measure": {
            "support": assignment.ball,
            "interior_mass": rational_str(mu_int),
            "boundary_term": rational_str(assignment.leakage / 2),
            "displacement": {k: rational_str(v) for k, v in disp.items()},
            "sup_displacement": rational_str(sup_one),
            "sup_displacement_approx": float(sup_one),
            "chain_lower_bound": rational_str(chain),
            "chain_holds": sup_one >= chain,
        },
        "step_identity": steps,
    }
    if fixed_point_a is not None:
        point = {PAIR_ALPHABET[s]: point_mass_displacement(images, fixed_point_a, (s,)) for s in range(4)}
        out["point_mass_at_fixed_point_of_a"] = {
            "displacement": point,
            "sup_displacement": max(point.values()),
            "meets_linear_constant": max(point.values()) >= LINEAR_CONSTANT,
        }
    out["pass"] = (
        out["uniform_measure"]["chain_holds"]
        and all(s["holds"] for s in steps)
        and out.get("point_mass_at_fixed_point_of_a", {}).get("meets_linear_constant", True)
    )
    return out


def signed_log10(x: Fraction) -> float:
    """``sign(x) log10(1 + |x|)`` without overflowing on huge rationals."""
    if x == 0:
        return 0.0
    ax = abs(x)
    try:
        v = math.log10(1 + float(ax))
    except OverflowError:
        v = math.log10(ax.numerator) - math.log10(ax.denominator)
    return v if x > 0 else -v


def plot_rows(orbits: Sequence[OrbitRecord]) -> list[tuple[float, float, int, int]]:
    """``(log-x, log-y, piece, word length)`` per explored point, for plotting."""
    rows = []
    for rec in orbits:
        if not rec.free:
            continue
        for i, w in enumerate(rec.words):
            p = rec.point(i)
            rows.append((signed_log10(p.x), signed_log10(p.y), piece_of(w), len(w)))
    return rows
