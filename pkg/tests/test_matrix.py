from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from affine_pingpong.arith import AffineElement, Mat2, RationalPoint, format_set, parse_element, parse_set, symmetrize
from affine_pingpong.errors import ParseError

small = st.integers(-6, 6)


@st.composite
def sl2(draw):
    # products of elementary matrices cover SL(2, Z) and stay small
    m = Mat2.identity()
    for _ in range(draw(st.integers(0, 5))):
        k = draw(st.integers(-3, 3))
        m = m * (Mat2.sl2(1, k, 0, 1) if draw(st.booleans()) else Mat2.sl2(1, 0, k, 1))
    return m


@st.composite
def affine(draw):
    return AffineElement(draw(sl2()), (draw(small), draw(small)))


def matmul3(x, y):
    return tuple(tuple(sum(x[i][k] * y[k][j] for k in range(3)) for j in range(3)) for i in range(3))


@given(affine(), affine(), affine())
def test_composition_is_associative(g, h, k):
    assert (g * h) * k == g * (h * k)


@given(affine(), affine())
def test_translation_composition_law(g, h):
    gh = g * h
    lin = g.linear.apply(h.translation)
    assert gh.translation == (lin[0] + g.translation[0], lin[1] + g.translation[1])
    assert gh.linear == g.linear * h.linear


@given(affine(), affine())
def test_embedding_is_multiplicative(g, h):
    assert (g * h).iota() == matmul3(g.iota(), h.iota())


@given(affine())
def test_inverse(g):
    assert (g * g.inverse()).is_identity()
    assert (g.inverse() * g).is_identity()


@given(affine(), small, small)
def test_action_matches_scaled_action(g, x, y):
    p = RationalPoint(Fraction(x, 3), Fraction(y, 5))
    X, Y = g.apply_scaled(5 * x, 3 * y, 15)
    assert g.apply(p) == RationalPoint(Fraction(X, 15), Fraction(Y, 15))


@given(affine(), sl2())
def test_conjugation_is_a_homomorphism(g, gamma):
    h = g.conjugate_by(gamma)
    assert h.linear == gamma * g.linear * gamma.inverse()
    assert (g * g).conjugate_by(gamma) == h * h


def test_sl2_rejects_bad_determinant():
    with pytest.raises(ValueError):
        Mat2.sl2(1, 2, 3, 4)
    with pytest.raises(ValueError):
        AffineElement(Mat2(2, 0, 0, 1))


def test_literal_round_trip():
    g = AffineElement.of(2, 1, 1, 1, -3, 7)
    assert g.to_literal() == "2 1 1 1 | -3 7"
    assert parse_element(g.to_literal()) == g
    assert parse_set(format_set([g, g.inverse()])) == [g, g.inverse()]


def test_parse_comments_and_document_form():
    text = "# header\n1 2 0 1   # L\n\n1 0 2 1 | 1 0\n"
    assert parse_set(text) == [AffineElement.of(1, 2, 0, 1), AffineElement.of(1, 0, 2, 1, 1, 0)]
    doc = '{"elements": ["1 2 0 1 | 0 0", "1 0 2 1 | 1 0"]}'
    assert parse_set(doc) == parse_set(text)


@pytest.mark.parametrize(
    "text, message",
    [
        ("1 2 0 1 | 0 x", "line 1, column 13: expected an integer, got 'x'"),
        ("1 2 0 2 | 0 0", "determinant 2"),
        ("1 2 0", "expected 4 integers, got 3"),
        ("", "no elements"),
        ("\n1 2 0 1\n1 0 2 1 | 1", "line 3"),
        ("{broken", "line 1"),
    ],
)
def test_parse_errors_carry_location(text, message):
    with pytest.raises(ParseError) as info:
        parse_set(text)
    assert message in str(info.value)
    assert info.value.exit_code == 2


def test_symmetrize_adds_identity_and_inverses():
    L = AffineElement.of(1, 2, 0, 1)
    out, added = symmetrize([L])
    assert added
    assert out == [AffineElement.identity(), L, L.inverse()]
    again, added2 = symmetrize(out)
    assert again == out and not added2
