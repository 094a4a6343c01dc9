from __future__ import annotations

import json
from fractions import Fraction

import pytest

from affine_pingpong.arith import AffineElement, Mat2, QuadNumber, parse_element
from affine_pingpong.errors import GlobalFixedPointError, ValidationError, VirtuallySolvableSignature
from affine_pingpong.pingpong import (
    FORMAT_NAME,
    FORMAT_VERSION,
    DiagonalFrame,
    Inequality,
    certificate_document,
    certify_linear_pair,
    certify_pair,
    dumps,
    load_document,
    recheck,
    recheck_text,
    schedule_params,
)
from affine_pingpong.pingpong.table import all_checks

from conftest import symmetric


# --- small pieces ---------------------------------------------------------------


def test_inequality_margin_and_strictness():
    assert Inequality.make("x", 2, ">", 1).passed
    assert not Inequality.make("x", 1, ">", 1).passed
    assert Inequality.make("x", 1, ">=", 1).passed
    assert Inequality.make("x", 1, "<", 2).margin == 1
    q = Inequality.make("x", QuadNumber.sqrt_of(2), "<=", Fraction(3, 2))
    assert q.passed and q.to_json()["pass"] is True


def test_schedule_relations():
    eta, H = Fraction(1, 3000), Fraction(5, 2)
    p = schedule_params(eta, H)
    assert p.eps2 == eta / 3 and p.delta2 == p.eps2 and p.R2 == 1 / p.eps2
    assert p.eps1 == p.eps2 / H**2
    assert p.delta1 == p.delta2 / H
    assert p.R1 == (p.R2 + 1) * H**2


# --- the shifted Sanov set ------------------------------------------------------


def test_norm_certificate_frozen(norm_cert):
    c = norm_cert
    assert c.exponents == {"N1": 2, "N2": 1, "N3": 62, "N4": 254, "N5": 3072}
    assert c.case == 1
    assert c.a == AffineElement.of(1, -2, -2, 5, -1, 2)
    assert c.h == AffineElement.of(1, -2, 0, 1)
    assert (c.ell, c.ell_bound, c.word_length) == (258, 1300, 518)
    assert c.within_bound
    assert c.pythagorean == (Fraction(431589, 1127789), Fraction(1041940, 1127789))
    assert 5.6e-49 < float(c.eta) < 5.7e-49


def test_data_certificate_frozen(data_cert):
    assert (data_cert.ell, data_cert.word_length) == (24, 50)
    assert data_cert.eta_mode == "data"


@pytest.mark.parametrize("which", ["norm_cert", "data_cert"])
def test_every_inequality_passes(which, request):
    c = request.getfixturevalue(which)
    assert not c.failed()
    names = [q.name for q in c.inequalities]
    assert len(names) == len(set(names)) == 41
    assert "master" in names and "players.i.b.inner" in names


@pytest.mark.parametrize("which", ["norm_cert", "data_cert"])
def test_ell_is_minimal(which, request):
    c = request.getfixturevalue(which)
    frame = DiagonalFrame(c.a, c.h)
    assert all(q.passed for q in all_checks(c.params, frame, c.eta, c.ell))
    assert not all(q.passed for q in all_checks(c.params, frame, c.eta, c.ell - 1))


def test_document_pair_matches_certificate(norm_cert):
    c = norm_cert
    doc = certificate_document(c)
    assert parse_element(doc["pair"]["a"]) == c.a_final
    assert parse_element(doc["pair"]["b"]) == c.b_final
    # the pair is conjugate back to the input coordinates and stays in SA(2, Z)
    assert c.a_final.linear.det() == 1 and c.b_final.linear.det() == 1
    assert c.b_final.linear.trace() == c.a_final.linear.trace()


def test_config_round_trips_into_document(norm_cert):
    doc = certificate_document(norm_cert)
    assert doc["format"] == FORMAT_NAME and doc["version"] == FORMAT_VERSION
    assert doc["config"]["eta_mode"] == "norm"
    assert doc["all_pass"] is True
    assert doc["kind"] == "affine"


def test_literal_set_has_global_fixed_point(literal_set):
    with pytest.raises(GlobalFixedPointError) as info:
        certify_pair(literal_set)
    assert "global fixed point (-1/2, 0)" in str(info.value)


def test_zero_translation_lift_fails():
    S = symmetric(AffineElement.of(1, 2, 0, 1), AffineElement.of(1, 0, 2, 1))
    with pytest.raises(GlobalFixedPointError, match=r"global fixed point \(0, 0\)"):
        certify_pair(S)


def test_translation_only_fails():
    S = symmetric(AffineElement.translation_by(1, 0), AffineElement.translation_by(0, 1))
    with pytest.raises(VirtuallySolvableSignature):
        certify_pair(S)


def test_asymmetric_input_rejected():
    with pytest.raises(ValueError, match="symmetric"):
        certify_pair([AffineElement.identity(), AffineElement.of(1, 2, 0, 1)])


def test_linear_certificate():
    L, R = Mat2.sl2(1, 2, 0, 1), Mat2.sl2(1, 0, 2, 1)
    c = certify_linear_pair([Mat2.identity(), L, L.inverse(), R, R.inverse()])
    assert (c.ell, c.ell_bound, c.within_bound, c.word_length) == (3, 250, True, 8)
    assert not c.failed()
    assert recheck(certificate_document(c)).ok


# --- documents and recheck ------------------------------------------------------


@pytest.mark.parametrize("which", ["norm_cert", "data_cert"])
def test_recheck_accepts(which, request):
    c = request.getfixturevalue(which)
    text = dumps(certificate_document(c))
    report = recheck_text(text)
    assert report.ok, report.failures
    assert report.checked == 41


def test_dumps_is_canonical(data_cert):
    text = dumps(certificate_document(data_cert))
    assert text == dumps(json.loads(text))


def tampered(doc, name, field="lhs"):
    doc = json.loads(json.dumps(doc))
    for q in doc["inequalities"]:
        if q["name"] == name:
            q[field] = {"p": "12345/1", "q": "0/1", "delta": 1}
    return doc


@pytest.mark.parametrize("name", ["master", "proper.1", "players.i.b.inner", "eta.separation[e1|z0]"])
def test_tampered_inequality_is_named(data_cert, name):
    report = recheck(tampered(certificate_document(data_cert), name))
    assert not report.ok
    assert any(name in line for line in report.stage1)
    assert any(name in line for line in report.stage2)


def test_tampered_pair_fails(data_cert):
    doc = certificate_document(data_cert)
    doc["pair"]["b"] = doc["pair"]["a"]
    assert not recheck(doc).ok


def test_tampered_eta_fails(data_cert):
    doc = certificate_document(data_cert)
    doc["eta"] = "1/7"
    assert not recheck(doc).ok


def test_bad_documents():
    with pytest.raises(ValidationError):
        load_document("{not json")
    with pytest.raises(ValidationError, match="not an affine ping-pong certificate"):
        load_document(json.dumps({"format": "other", "version": 1}))
    with pytest.raises(ValidationError, match="version 2 is not supported"):
        load_document(json.dumps({"format": FORMAT_NAME, "version": 2}))
