"""Certificate documents and their independent two-stage recheck.

A document is plain JSON.  Every inequality is stored with both sides as
exact numbers ``{"p", "q", "delta"}`` meaning ``p + q sqrt(delta)``, so the
first recheck stage needs nothing beyond exact field arithmetic.  The second
stage rebuilds the frame and every check from the stored ``a``, ``h``,
``ell``, ``eta`` and unit direction and compares the results.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from ..arith import AffineElement, Mat2, NormInterval, QuadNumber, evaluate, parse_element, rational_str
from ..errors import ValidationError
from .certify import FreePairCertificate, LinearPairCertificate
from .table import DiagonalFrame, Inequality, LinearFrame, all_checks, linear_checks, schedule_params

FORMAT_NAME = "affine-pingpong-certificate"
FORMAT_VERSION = 1
RELATIONS = (">", ">=", "<", "<=")


def _words_json(word) -> dict:
    return {"letters": list(word.letters), "element": word.evaluated.to_literal()}


def certificate_document(cert: FreePairCertificate | LinearPairCertificate) -> dict:
    common = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "kind": cert.kind,
        "input": {"elements": [g.to_literal() for g in cert.input_elements]},
        "config": cert.config,
        "conjugator": list(cert.conjugator.entries()),
        "reduced_norm": cert.reduced_norm.to_json(),
        "exponents": cert.exponents,
        "ell": cert.ell,
        "norm_h": cert.norm_h.to_json(),
        "frame": cert.frame,
        "inequalities": [q.to_json() for q in cert.inequalities],
        "all_pass": not cert.failed(),
        "pair": {"a": cert.a_final.to_literal(), "b": cert.b_final.to_literal()},
        "word_length": cert.word_length,
    }
    if isinstance(cert, LinearPairCertificate):
        common.update(
            {
                "words": {"a": _words_json(cert.a_word), "h": _words_json(cert.h_word)},
                "a": " ".join(str(x) for x in cert.a.entries()),
                "h": " ".join(str(x) for x in cert.h.entries()),
                "ell_bound": cert.ell_bound,
                "within_bound": cert.within_bound,
            }
        )
        return common
    common.update(
        {
            "words": {
                "a0": _words_json(cert.a0_word),
                "h0": _words_json(cert.h0_word),
                "a": list(cert.a_word),
                "h": list(cert.h_word),
            },
            "case": cert.case,
            "geometry": cert.geometry,
            "a": cert.a.to_literal(),
            "h": cert.h.to_literal(),
            "ell_bound": cert.ell_bound,
            "within_bound": cert.within_bound,
            "eta": rational_str(cert.eta),
            "eta_mode": cert.eta_mode,
            "params": cert.params.to_json(),
            "unit_direction": [rational_str(x) for x in cert.pythagorean],
        }
    )
    return common


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def load_document(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"certificate is not valid JSON: {exc.msg}", [f"json: line {exc.lineno}"]) from None
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_NAME:
        raise ValidationError("not an affine ping-pong certificate", ["format"])
    if doc.get("version") != FORMAT_VERSION:
        raise ValidationError(
            f"certificate version {doc.get('version')!r} is not supported (expected {FORMAT_VERSION})", ["version"]
        )
    return doc


@dataclass
class RecheckReport:
    stage1: list = field(default_factory=list)
    stage2: list = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.stage1 and not self.stage2

    @property
    def failures(self) -> list[str]:
        return self.stage1 + self.stage2

    def to_json(self) -> dict:
        return {"ok": self.ok, "inequalities_checked": self.checked, "stage1": self.stage1, "stage2": self.stage2}


def _stored_inequality(entry: dict) -> Inequality:
    rel = entry["relation"]
    if rel not in RELATIONS:
        raise ValueError(f"unknown relation {rel!r}")
    return Inequality(entry["name"], QuadNumber.from_json(entry["lhs"]), rel, QuadNumber.from_json(entry["rhs"]))


def recheck_stored(doc: dict) -> tuple[list[str], int]:
    """Stage 1: every stored inequality holds and its margin matches its sides."""
    failures = []
    entries = doc.get("inequalities") or []
    if not entries:
        failures.append("inequalities: none stored")
    for i, entry in enumerate(entries):
        name = entry.get("name", f"#{i}") if isinstance(entry, dict) else f"#{i}"
        try:
            q = _stored_inequality(entry)
            margin = QuadNumber.from_json(entry["margin"])
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            failures.append(f"inequality {name}: malformed ({exc})")
            continue
        if q.margin != margin:
            failures.append(f"inequality {name}: stored margin does not match lhs and rhs")
        if not q.passed:
            failures.append(f"inequality {name}: does not hold (margin {q.margin.sci()})")
        if entry.get("pass") is not True:
            failures.append(f"inequality {name}: stored as failing")
    return failures, len(entries)


def _compare_checks(stored: list[dict], fresh: list[Inequality]) -> list[str]:
    failures = []
    by_name = {}
    for entry in stored:
        if isinstance(entry, dict) and "name" in entry:
            by_name[entry["name"]] = entry
    fresh_names = set()
    for q in fresh:
        fresh_names.add(q.name)
        if not q.passed:
            failures.append(f"inequality {q.name}: fails on recomputation")
        entry = by_name.get(q.name)
        if entry is None:
            failures.append(f"inequality {q.name}: missing from certificate")
            continue
        try:
            same = (
                entry["relation"] == q.relation
                and QuadNumber.from_json(entry["lhs"]) == q.lhs
                and QuadNumber.from_json(entry["rhs"]) == q.rhs
            )
        except (KeyError, TypeError, ValueError, ZeroDivisionError):
            same = False
        if not same:
            failures.append(f"inequality {q.name}: stored sides differ from recomputation")
    for name in by_name:
        if name not in fresh_names:
            failures.append(f"inequality {name}: not produced by recomputation")
    return failures


def _parse_mat(entries) -> Mat2:
    vals = [int(x) for x in (entries.split() if isinstance(entries, str) else entries)]
    m = Mat2(*vals)
    if m.det() != 1:
        raise ValueError("matrix must have determinant 1")
    return m


def _recheck_affine(doc: dict) -> list[str]:
    failures = []
    S = [parse_element(s) for s in doc["input"]["elements"]]
    gamma = _parse_mat(doc["conjugator"])
    S_red = [s.conjugate_by(gamma) for s in S]
    a = parse_element(doc["a"])
    h = parse_element(doc["h"])
    ell = int(doc["ell"])
    if ell < 1:
        return ["ell: must be positive"]
    a_word = [int(i) for i in doc["words"]["a"]]
    h_word = [int(i) for i in doc["words"]["h"]]
    if evaluate(a_word, S_red) != a:
        failures.append("words.a: does not evaluate to a in the reduced set")
    if evaluate(h_word, S_red) != h:
        failures.append("words.h: does not evaluate to h in the reduced set")

    alpha, beta = (Fraction(x) for x in doc["unit_direction"])
    frame = DiagonalFrame(a, h, (alpha, beta))
    norm_h = NormInterval.from_json(doc["norm_h"])
    frame.H = norm_h.upper
    eta = Fraction(doc["eta"])
    params = schedule_params(eta, norm_h)
    if params.to_json() != doc["params"]:
        failures.append("params: stored radii differ from the schedule applied to eta and H")
    failures += _compare_checks(doc["inequalities"], all_checks(params, frame, eta, ell))

    gamma_inv = gamma.adjugate()
    a_pow = a**ell
    a_final = a_pow.conjugate_by(gamma_inv)
    b_final = (h * a_pow * h.inverse()).conjugate_by(gamma_inv)
    if parse_element(doc["pair"]["a"]) != a_final:
        failures.append("pair.a: differs from the conjugated power of a")
    if parse_element(doc["pair"]["b"]) != b_final:
        failures.append("pair.b: differs from the conjugated power of h a h^-1")
    inv = {g.key(): i for i, g in enumerate(S)}
    h_inv_word = []
    for i in reversed(h_word):
        j = inv.get(S[i].inverse().key())
        if j is None:
            failures.append("input: generating set is not symmetric")
            return failures
        h_inv_word.append(j)
    if evaluate(a_word * ell, S) != a_final:
        failures.append("pair.a: not the stated word in the input set")
    if evaluate(h_word + a_word * ell + h_inv_word, S) != b_final:
        failures.append("pair.b: not the stated word in the input set")
    return failures


def _recheck_linear(doc: dict) -> list[str]:
    failures = []
    a = _parse_mat(doc["a"])
    h = _parse_mat(doc["h"])
    ell = int(doc["ell"])
    if ell < 1:
        return ["ell: must be positive"]
    frame = LinearFrame(a, h)
    frame.H = NormInterval.from_json(doc["norm_h"]).upper
    failures += _compare_checks(doc["inequalities"], linear_checks(frame, ell))
    gamma_inv = _parse_mat(doc["conjugator"]).adjugate()
    a_pow = AffineElement(a) ** ell
    if parse_element(doc["pair"]["a"]) != a_pow.conjugate_by(gamma_inv):
        failures.append("pair.a: differs from the conjugated power of a")
    b = AffineElement(h) * a_pow * AffineElement(h).inverse()
    if parse_element(doc["pair"]["b"]) != b.conjugate_by(gamma_inv):
        failures.append("pair.b: differs from the conjugated power of h a h^-1")
    return failures


def recheck(doc: dict) -> RecheckReport:
    """Two-stage recheck of a loaded certificate document."""
    report = RecheckReport()
    report.stage1, report.checked = recheck_stored(doc)
    try:
        if doc.get("kind") == "linear":
            report.stage2 = _recheck_linear(doc)
        else:
            report.stage2 = _recheck_affine(doc)
    except (KeyError, TypeError, ValueError, ArithmeticError) as exc:
        report.stage2.append(f"recompute: {type(exc).__name__}: {exc}")
    return report


def recheck_text(text: str) -> RecheckReport:
    return recheck(load_document(text))
