"""Bounded ball enumeration in S^k and the conjugator search."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Sequence

from ..errors import BudgetExceeded
from .matrix import AffineElement, Mat2
from .norms import NormInterval, op_norm, spectral_radius
from .quadratic import QuadNumber
from .words import WordPath

DEFAULT_BALL_CAP = 10**6


def _labels(S: Sequence[AffineElement]) -> tuple[str, ...]:
    return tuple(s.to_literal() for s in S)


def ball_layers(
    S: Sequence[AffineElement],
    k: int,
    *,
    linear_only: bool = False,
    cap: int = DEFAULT_BALL_CAP,
) -> Iterator[list[WordPath]]:
    """Yield the new elements of S^1, S^2, ..., S^k layer by layer.

    Elements are deduplicated by the 3x3 embedding (or by the linear part when
    ``linear_only``).  Words grow by right multiplication, so within a layer
    the order is deterministic.  Raises BudgetExceeded past ``cap`` elements.
    """
    labels = _labels(S)
    keyf = (lambda g: g.key()[:4]) if linear_only else (lambda g: g.key())
    ident = AffineElement.identity()
    seen = {keyf(ident)}
    frontier = [WordPath((), ident, labels)]
    total = 1
    for depth in range(1, k + 1):
        layer: list[WordPath] = []
        for w in frontier:
            for i, s in enumerate(S):
                g = w.evaluated * s
                key = keyf(g)
                if key in seen:
                    continue
                seen.add(key)
                layer.append(WordPath(w.letters + (i,), g, labels))
                total += 1
                if total > cap:
                    raise BudgetExceeded(
                        f"ball cap {cap} exceeded while enumerating S^{depth}", explored=depth - 1
                    )
        yield layer
        frontier = layer
        if not layer:
            return


def ball(S: Sequence[AffineElement], k: int, *, linear_only: bool = False, cap: int = DEFAULT_BALL_CAP) -> list[WordPath]:
    """All distinct elements of S^k with a shortest word each, identity first."""
    out = [WordPath((), AffineElement.identity(), _labels(S))]
    for layer in ball_layers(S, k, linear_only=linear_only, cap=cap):
        out.extend(layer)
    return out


def _best(words: Sequence[WordPath]) -> tuple[QuadNumber, WordPath]:
    best_r, best_w = None, None
    for w in words:
        r = spectral_radius(w.evaluated.linear)
        if (
            best_r is None
            or r > best_r
            or (r == best_r and w.evaluated.order_key() < best_w.evaluated.order_key())
        ):
            best_r, best_w = r, w
    return best_r, best_w


def ball_max_spectral_radius(
    S: Sequence[AffineElement], k: int, cap: int = DEFAULT_BALL_CAP
) -> tuple[QuadNumber, WordPath]:
    """Largest spectral radius over theta(S)^k with a witness word.

    Ties go to the smallest 3x3 embedding in lexicographic order.
    """
    return _best(ball(S, k, linear_only=True, cap=cap))


_MOVES = (
    Mat2(1, 1, 0, 1),
    Mat2(1, -1, 0, 1),
    Mat2(1, 0, 1, 1),
    Mat2(1, 0, -1, 1),
)


def _conj_linear(gamma: Mat2, M: Mat2) -> Mat2:
    return gamma * M * gamma.adjugate()


def _set_score(gamma: Mat2, mats: Sequence[Mat2], tol: Fraction) -> Fraction:
    return max(op_norm(_conj_linear(gamma, m), tol).upper for m in mats)


def conjugation_reduce(
    S: Sequence[AffineElement],
    budget: int = 256,
    *,
    beam_width: int = 4,
    max_depth: int = 16,
    tol: Fraction = Fraction(1, 2**40),
) -> tuple[Mat2, NormInterval]:
    """Search for ``gamma`` in SL(2, Z) shrinking ``max ||gamma theta(s) gamma^-1||``.

    Beam search over products of the elementary unipotents and their
    inverses.  ``budget`` caps the number of scored conjugators.  Returns the
    identity when nothing beats it; ties go to the smaller entry tuple.
    """
    mats = [s.linear for s in S]
    ident = Mat2.identity()
    best_score = _set_score(ident, mats, tol)
    best = ident
    beam = [(best_score, ident.entries(), ident)]
    seen = {ident.entries()}
    spent = 1
    for _ in range(max_depth):
        candidates = []
        for _score, _key, gamma in beam:
            for m in _MOVES:
                g = m * gamma
                if g.entries() in seen:
                    continue
                seen.add(g.entries())
                if spent >= budget:
                    break
                spent += 1
                candidates.append((_set_score(g, mats, tol), g.entries(), g))
        if not candidates:
            break
        candidates.sort(key=lambda c: (c[0], c[1]))
        beam = candidates[:beam_width]
        if beam[0][0] < best_score:
            best_score, best = beam[0][0], beam[0][2]
        if spent >= budget:
            break
    reduced = NormInterval.hull(op_norm(_conj_linear(best, m), tol) for m in mats)
    return best, reduced
