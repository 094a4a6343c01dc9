from __future__ import annotations

import mpmath
import pytest

from affine_pingpong.arith import AffineElement, RationalPoint, fixed_point
from affine_pingpong.errors import BudgetExceeded
from affine_pingpong.verify import (
    default_sample_points,
    enumerate_reduced,
    freeness_check,
    local_commutativity_check,
    table_geometry,
    table_invariant_sample,
    validation_report,
    word_text,
)

Lz = AffineElement.of(1, 2, 0, 1)
Rz = AffineElement.of(1, 0, 2, 1)


def test_reduced_word_counts():
    words = list(enumerate_reduced(3))
    by_len = [sum(1 for w in words if len(w.letters) == n) for n in (1, 2, 3)]
    assert by_len == [4, 12, 36]
    assert len(words) == 52
    assert all(words[i].letters[k + 1] != words[i].letters[k] ^ 1 for i in range(52) for k in range(len(words[i].letters) - 1))


def test_reduced_words_are_ordered():
    words = [w.letters for w in enumerate_reduced(3)]
    assert words == sorted(words, key=lambda w: (len(w), w))


def test_word_cap():
    with pytest.raises(BudgetExceeded):
        list(enumerate_reduced(13))
    assert list(enumerate_reduced(0)) == []


def test_word_text():
    assert word_text(()) == "1"
    assert word_text((0, 3, 1)) == "a b^-1 a^-1"


def test_sanov_linear_pair_is_free():
    report = freeness_check(Lz, Rz, 10)
    assert report.ok
    assert report.words_checked == 2 * (3**10 - 1)


def test_equal_generators_give_length_two_relation():
    report = freeness_check(Lz, Lz, 4)
    assert not report.ok
    assert word_text(report.counterexample.letters) == "a b^-1"
    assert report.to_json()["counterexample"] == "a b^-1"


def test_commuting_generators_give_relation():
    report = freeness_check(Lz, Lz * Lz, 4)
    assert not report.ok and len(report.counterexample.letters) == 3


def test_common_fixed_point_violates_local_commutativity():
    # both fix the origin and do not commute
    report = local_commutativity_check(Lz, Rz, 2)
    assert not report.ok
    assert any(c[2].kind == "point" and c[2].point == RationalPoint(0, 0) for c in report.counterexamples)


def test_fixed_line_meeting_a_fixed_point_is_caught():
    # a fixes the line y = 0, b fixes only the origin, which lies on it
    b = AffineElement.of(2, 1, 1, 1)
    report = local_commutativity_check(Lz, b, 1)
    assert not report.ok
    kinds = {(fixed_point(w1.evaluated).kind, fixed_point(w2.evaluated).kind) for w1, w2, _ in report.counterexamples}
    assert ("line", "point") in kinds
    for w1, w2, _ in report.counterexamples:
        assert w1.evaluated * w2.evaluated != w2.evaluated * w1.evaluated


def test_certified_pair_short_checks(data_cert):
    a, b = data_cert.a_final, data_cert.b_final
    assert freeness_check(a, b, 6).ok
    report = local_commutativity_check(a, b, 4)
    assert report.ok and report.identity_words == 0


def test_default_sample_points_are_seeded():
    p1 = default_sample_points(3)
    assert p1 == default_sample_points(3)
    assert p1 != default_sample_points(4)
    assert len(p1) == 33 * 33 + 200


def to_mp(x):
    return mpmath.mpf(x.p.numerator) / x.p.denominator + mpmath.mpf(x.q.numerator) / x.q.denominator * mpmath.sqrt(x.delta)


def oracle_membership(geo, letter, X, Y, D):
    """Frame coordinates in 60-digit floats; membership from the set definitions."""
    mpmath.mp.dps = 60
    if letter >= 2:
        X, Y = geo.h_inv.apply_scaled(X, Y, D)
    phi = geo.frame.phi_a
    dx = mpmath.mpf(X) / D - mpmath.mpf(phi.x.numerator) / phi.x.denominator
    dy = mpmath.mpf(Y) / D - mpmath.mpf(phi.y.numerator) / phi.y.denominator
    g = [to_mp(e) for e in geo.frame.g_inv.entries()]
    x1, x2 = g[0] * dx + g[1] * dy, g[2] * dx + g[3] * dy
    norm = mpmath.sqrt(x1 * x1 + x2 * x2)
    eps = mpmath.mpf(geo.params.eps1.numerator) / geo.params.eps1.denominator
    r_out = mpmath.mpf(geo.params.R1.numerator) / geo.params.R1.denominator
    r_in = mpmath.mpf(geo.params.delta1.numerator) / geo.params.delta1.denominator
    near, far = (x2, x1) if letter & 1 else (x1, x2)
    plus = abs(far) <= eps * norm and norm > r_out
    minus = abs(near) <= eps * norm or norm <= r_in
    margins = [abs(abs(far) - eps * norm), abs(norm - r_out), abs(abs(near) - eps * norm), abs(norm - r_in)]
    return plus, minus, min(m / (1 + norm) for m in margins)


def test_membership_agrees_with_high_precision_oracle(data_cert):
    geo = table_geometry(data_cert)
    checked = 0
    pts = default_sample_points(5, grid=5, extra=40)
    for p in pts:
        X, Y, D = geo.to_reduced(p)
        candidates = [(X, Y)] + [img.apply_scaled(X, Y, D) for img in geo.reduced_images]
        for Xc, Yc in candidates:
            for letter in range(4):
                plus, minus, margin = oracle_membership(geo, letter, Xc, Yc, D)
                if margin < mpmath.mpf(10) ** -40:
                    continue
                assert geo.membership(letter, Xc, Yc, D) == (plus, minus)
                checked += 1
    assert checked > 500


def test_images_land_in_plus_sets(data_cert):
    geo = table_geometry(data_cert)
    for p in default_sample_points(1, grid=3, extra=20):
        X, Y, D = geo.to_reduced(p)
        for letter, img in enumerate(geo.reduced_images):
            if geo.membership(letter, X, Y, D)[1]:
                continue
            Xi, Yi = img.apply_scaled(X, Y, D)
            assert geo.membership(letter, Xi, Yi, D)[0]


def test_table_sampling_small(data_cert):
    report = table_invariant_sample(data_cert, default_sample_points(2, grid=5, extra=20), L=3)
    assert report.ok
    assert report.word_applications > 0
    assert report.to_json()["containment_violations"] == 0


def test_validation_report_on_bad_pair():
    doc = validation_report(Lz, Lz, free_length=3, lc_length=2)
    assert not doc["pass"]
    assert doc["checks"][1]["skipped"] == "pair is not free"
