from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from affine_pingpong.arith import AffineElement
from affine_pingpong.spectral import (
    GapEstimate,
    QuotientElement,
    closure_check,
    format_gap_table,
    gap_table,
    group_elements,
    herz_compare,
    implied_kazhdan,
    l2_kazhdan_from_action,
    margulis_set,
    operator_norm_est,
    reduce_mod,
    sa2_order,
    schreier_operator,
)

from conftest import symmetric

# frozen from an independent dense build (see plane_matrix below)
PLANE_NORMS = {3: 0.9291502622129184, 5: 0.9089728882090891, 7: 0.919570412622343}


def plane_matrix(S, n):
    """Averaging operator on (Z/n)^2 built directly from the generator list."""
    N = n * n
    P = np.zeros((N, N))
    for g in S:
        a11, a12, a21, a22, t1, t2 = g.key()
        for x in range(n):
            for y in range(n):
                gx = ((a11 * x + a12 * y + t1) % n, (a21 * x + a22 * y + t2) % n)
                P[gx[0] * n + gx[1], x * n + y] += 1.0 / len(S)
    return P


def mean_zero_norm(P):
    N = P.shape[0]
    Q = P - np.ones((N, N)) / N
    return float(np.max(np.abs(np.linalg.eigvalsh((Q + Q.T) / 2))))


def _product(gs):
    g = AffineElement.identity()
    for x in gs:
        g = g * x
    return g


_gens = [AffineElement.of(1, 1, 0, 1), AffineElement.of(1, 0, 1, 1), AffineElement.translation_by(1, 0)]
elements = st.lists(st.sampled_from(range(3)), max_size=12).map(
    lambda word: QuotientElement.reduce(_product([_gens[i] for i in word]), 7)
)


@given(elements, elements, elements)
def test_quotient_group_laws(g, h, k):
    assert (g * h) * k == g * (h * k)
    assert (g * g.inverse()).is_identity()
    x, y = 3, 5
    assert (g * h).apply(x, y) == g.apply(*h.apply(x, y))


def test_reduce_mod_counts_multiplicity():
    S = [AffineElement.identity(), AffineElement.translation_by(2, 0), AffineElement.translation_by(-2, 0)]
    red = reduce_mod(S, 2)
    assert list(red.values()) == [3]
    assert QuotientElement.reduce(AffineElement.translation_by(2, 0), 2).is_identity()


def test_sa2_order():
    assert [sa2_order(p) for p in (2, 3, 5)] == [24, 216, 3000]
    assert len(group_elements(3)) == 216


def test_closure(shifted_set):
    assert closure_check(shifted_set, 3).surjective
    lifts = symmetric(AffineElement.of(1, 2, 0, 1), AffineElement.of(1, 0, 2, 1))
    assert closure_check(lifts, 3).order == 24
    trans = symmetric(AffineElement.translation_by(1, 0), AffineElement.translation_by(0, 1))
    res = closure_check(trans, 3)
    assert res.order == 9 and res.to_json()["result"] == "proper-subgroup(9)"


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_operator_matches_direct_build(shifted_set, n):
    op = schreier_operator(shifted_set, n)
    P = plane_matrix(shifted_set, n)
    N = n * n
    assert np.allclose(op.dense(), P - np.ones((N, N)) / N)
    assert op.is_symmetric()
    assert (op.row_sums() == op.weight).all()


@pytest.mark.parametrize("n", sorted(PLANE_NORMS))
def test_plane_norm_frozen(shifted_set, n):
    est = operator_norm_est(schreier_operator(shifted_set, n))
    assert abs(est.norm_estimate - PLANE_NORMS[n]) < 1e-9
    assert abs(mean_zero_norm(plane_matrix(shifted_set, n)) - PLANE_NORMS[n]) < 1e-12
    assert est.components == 1 and est.converged


@pytest.mark.parametrize("n", [2, 4, 6])
def test_even_moduli_disconnect(shifted_set, n):
    est = operator_norm_est(schreier_operator(shifted_set, n))
    assert est.components > 1
    assert abs(est.norm_estimate - 1.0) < 1e-9
    assert est.kazhdan_lower == 0.0


def test_certified_upper_bounds_estimate(shifted_set):
    est = operator_norm_est(schreier_operator(shifted_set, 11), dense_check=False)
    assert est.dense_norm is None and est.dense_agrees is None
    assert est.norm_estimate <= est.certified_upper <= 1.0
    assert est.certified_upper - est.norm_estimate <= est.residual + 1e-15


def test_lanczos_seed_independent(shifted_set):
    op = schreier_operator(shifted_set, 9)
    a, b = operator_norm_est(op, seed=0), operator_norm_est(op, seed=5)
    assert abs(a.norm_estimate - b.norm_estimate) < 1e-9


def test_cayley_mode_and_herz(shifted_set):
    op = schreier_operator(shifted_set, 3, "cayley")
    assert op.states == 216
    h = herz_compare(shifted_set, 3)
    assert h["holds"] and h["slack"] >= -1e-9
    with pytest.raises(ValueError):
        schreier_operator(shifted_set, 3, "torus")


def test_margulis_table():
    S = margulis_set()
    assert len(S) == 9
    rows = gap_table(S, [3, 5])
    assert all(r.sandwich_ok() for r in rows)
    assert all(0 < r.kazhdan_lower < 1 for r in rows)
    text = format_gap_table(rows)
    assert text.splitlines()[0].split("\t") == list(GapEstimate.ROW_FIELDS)
    assert len(text.splitlines()) == 3


def test_implied_kazhdan():
    assert implied_kazhdan(518) == Fraction(1, 4144)
    with pytest.raises(ValueError):
        implied_kazhdan(0)


def test_l2_kazhdan_from_action(data_cert):
    rep = l2_kazhdan_from_action(data_cert, 5)
    assert rep["implied_kazhdan"] == "1/400"
    assert rep["consistent"]
