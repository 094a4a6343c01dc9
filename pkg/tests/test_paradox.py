from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from affine_pingpong.arith import AffineElement, RationalPoint, unique_fixed_point
from affine_pingpong.errors import HypothesisError
from affine_pingpong.paradox import (
    dekker_pieces,
    nonamenability_report,
    orbit_decompose,
    piece_of,
    plot_rows,
    signed_log10,
)

SEED = RationalPoint(Fraction(1, 3), Fraction(1, 7))


def ball_size(L: int) -> int:
    return 1 + 2 * (3**L - 1)


@pytest.fixture(scope="module")
def explored(data_cert):
    a, b = data_cert.a_final, data_cert.b_final
    orbits = orbit_decompose(a, b, [SEED, SEED], 6)
    return a, b, orbits


def test_orbit_is_free_and_full(explored):
    _, _, orbits = explored
    assert len(orbits) == 1
    rec = orbits[0]
    assert rec.free and rec.status == "free-up-to-6"
    assert len(rec) == ball_size(6) == 1457
    assert rec.merged_seeds == [SEED]


def test_orbit_words_reach_their_points(explored):
    a, b, orbits = explored
    images = {0: a, 1: a.inverse(), 2: b, 3: b.inverse()}
    rec = orbits[0]
    for i in range(0, len(rec), 97):
        p = SEED
        for s in reversed(rec.words[i]):
            p = images[s].apply(p)
        assert p == rec.point(i)


def test_piece_sizes_match_word_counts(explored):
    a, b, orbits = explored
    asg = dekker_pieces(orbits, a, b)
    # words starting with b or b^-1: 1 + 3 + ... + 3^5 each; a^1..a^6 and 1 move to piece 2
    starts = sum(3**k for k in range(6))
    assert [len(p) for p in asg.pieces] == [starts - 6, starts + 7, starts, starts]
    assert asg.disjoint
    assert asg.covers_exact == [True, True]
    assert asg.interior == ball_size(5) == 485
    assert asg.leakage == Fraction(1457 - 485, 1457)
    assert asg.leakage < 1


def test_piece_of():
    assert piece_of(()) == 2
    assert piece_of((0, 0, 0)) == 2
    assert piece_of((0, 2)) == 1
    assert piece_of((1,)) == 2
    assert piece_of((2, 0)) == 3
    assert piece_of((3,)) == 4


@given(st.lists(st.integers(0, 3), max_size=8))
def test_pieces_cover_words(word):
    assert piece_of(tuple(word)) in (1, 2, 3, 4)


def test_nonamenability_constants(explored):
    a, b, orbits = explored
    asg = dekker_pieces(orbits, a, b)
    rep = nonamenability_report(a, b, orbits, asg, unique_fixed_point(a))
    um = rep["uniform_measure"]
    assert um["displacement"] == {"a": "729/1457", "a^-1": "729/1457", "b": "729/1457", "b^-1": "729/1457"}
    assert um["chain_holds"]
    assert all(s["holds"] for s in rep["step_identity"])
    assert rep["point_mass_at_fixed_point_of_a"]["displacement"]["b"] == 1
    assert rep["pass"]


def test_stabilized_orbit_is_rejected(data_cert):
    a, b = data_cert.a_final, data_cert.b_final
    orbits = orbit_decompose(a, b, [unique_fixed_point(a)], 3)
    assert orbits[0].status == "stabilized(a)"
    with pytest.raises(HypothesisError):
        dekker_pieces(orbits, a, b)


def test_equal_generators_stabilize():
    a = AffineElement.of(2, 1, 1, 1, 1, 0)
    orbits = orbit_decompose(a, a, [SEED], 2)
    assert orbits[0].status == "stabilized(a^-1 b)"


def test_signed_log_handles_huge_values():
    assert signed_log10(Fraction(0)) == 0.0
    assert signed_log10(Fraction(9)) == pytest.approx(1.0)
    assert signed_log10(Fraction(-9)) == pytest.approx(-1.0)
    assert signed_log10(Fraction(10**400)) == pytest.approx(400.0)
    assert signed_log10(Fraction(-(10**400))) == pytest.approx(-400.0)


def test_plot_rows(explored):
    _, _, orbits = explored
    rows = plot_rows(orbits)
    assert len(rows) == 1457
    assert {r[2] for r in rows} == {1, 2, 3, 4}
