from __future__ import annotations

import json
import subprocess
import sys

import pytest

from affine_pingpong.cli import _parse_moduli, _parse_points, main

from conftest import SETS

SHIFTED = str(SETS / "sanov_shifted.txt")
LITERAL = str(SETS / "sanov_lift.txt")


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture(scope="module")
def cert_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cert") / "cert.json"
    assert main(["certify", "-i", SHIFTED, "-o", str(path), "--eta-mode", "data"]) == 0
    return path


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_certify_writes_document(cert_file):
    doc = json.loads(cert_file.read_text())
    assert doc["all_pass"] and doc["ell"] == 24
    assert doc["run"]["config"]["eta_mode"] == "data"
    assert doc["run"]["config"]["input"] == "sanov_shifted.txt"
    assert len(doc["run"]["input_sha256"]) == 64


def test_certify_norm_mode_to_stdout(capsys):
    code, out, err = run(["certify", "-i", SHIFTED], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["ell"] == 258 and doc["within_bound"]
    assert "certified: ell=258" in err


def test_certify_literal_set_reports_fixed_point(capsys):
    code, out, err = run(["certify", "-i", LITERAL], capsys)
    assert code == 3
    assert "global fixed point (-1/2, 0)" in err
    assert out == ""


def test_certify_translation_only(tmp_path, capsys):
    path = write(tmp_path, "t.txt", "1 0 0 1 | 1 0\n1 0 0 1 | 0 1\n")
    code, _, err = run(["certify", "-i", path], capsys)
    assert code == 3 and "virtually solvable" in err


@pytest.mark.parametrize(
    "text, fragment",
    [("", "no elements"), ("1 2 0 1 | 0 zz\n", "line 1, column 13"), ("2 0 0 2\n", "determinant 4")],
)
def test_certify_parse_errors(tmp_path, capsys, text, fragment):
    code, _, err = run(["certify", "-i", write(tmp_path, "bad.txt", text)], capsys)
    assert code == 2 and fragment in err


def test_missing_input_file(tmp_path, capsys):
    code, _, err = run(["certify", "-i", tmp_path / "nope.txt"], capsys)
    assert code == 2 and "cannot read" in err


def test_linear_certificate(tmp_path, capsys):
    path = write(tmp_path, "lin.txt", "1 2 0 1\n1 0 2 1\n")
    code, out, _ = run(["certify", "--linear", "-i", path], capsys)
    assert code == 0 and json.loads(out)["kind"] == "linear"
    code, _, err = run(["certify", "--linear", "-i", SHIFTED], capsys)
    assert code == 2 and "zero translations" in err


def test_recheck(cert_file, capsys):
    code, _, err = run(["recheck", cert_file], capsys)
    assert code == 0 and "recheck ok: 41 inequalities" in err


def test_recheck_tampered(cert_file, tmp_path, capsys):
    doc = json.loads(cert_file.read_text())
    for q in doc["inequalities"]:
        if q["name"] == "dilation.ii":
            q["rhs"] = {"p": "0/1", "q": "0/1", "delta": 1}
    path = write(tmp_path, "bad.json", json.dumps(doc))
    code, _, err = run(["recheck", path], capsys)
    assert code == 6
    assert "dilation.ii" in err


def test_recheck_not_a_certificate(tmp_path, capsys):
    code, _, _ = run(["recheck", write(tmp_path, "x.json", "[1, 2]")], capsys)
    assert code == 6


def test_free_check(cert_file, capsys):
    argv = ["free-check", "-i", cert_file, "--lfree", 4, "--lcomm", 3, "--sample-length", 2, "--random-points", 10]
    code, out, _ = run(argv, capsys)
    assert code == 0
    doc = json.loads(out)
    assert [c["check"] for c in doc["checks"]] == ["freeness", "local_commutativity", "table_sampling"]
    assert doc["pass"]


def test_paradox_outputs(cert_file, tmp_path, capsys):
    out = tmp_path / "par.json"
    code, _, _ = run(["paradox", "-i", cert_file, "-o", out, "--orbit-radius", 4], capsys)
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["pass"] and doc["pieces"]["covers"][0]["exact"]
    tsv = (tmp_path / "par.pieces.tsv").read_text().splitlines()
    assert tsv[0].split("\t") == ["x_signed_log10", "y_signed_log10", "piece", "word_length"]
    assert len(tsv) == 1 + 1 + 2 * (3**4 - 1)
    assert (tmp_path / "par.pieces.png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_paradox_bad_points(cert_file, capsys):
    code, _, err = run(["paradox", "-i", cert_file, "--points", "1/3"], capsys)
    assert code == 2 and "bad point" in err


def test_gap_table(tmp_path, capsys):
    out = tmp_path / "gap.tsv"
    code, _, _ = run(["gap", "-o", out, "--moduli", "2-5"], capsys)
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# {") and lines[1].startswith("# input_sha256")
    header = lines[2].split("\t")
    assert header[-1] == "status" and header[0] == "n"
    rows = [l.split("\t") for l in lines[3:]]
    assert [r[0] for r in rows] == ["2", "3", "4", "5"]
    assert (tmp_path / "gap.png").exists()


def test_gap_stdout_and_bad_moduli(capsys):
    code, out, _ = run(["gap", "--moduli", "3"], capsys)
    assert code == 0 and out.splitlines()[3].startswith("3\t9\t")
    code, _, err = run(["gap", "--moduli", "1"], capsys)
    assert code == 2


def test_quotient_check(capsys):
    code, out, _ = run(["quotient-check", "-i", SHIFTED, "--moduli", "2,3", "--herz-max", 3], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["pass"]
    assert doc["quotients"][1]["closure"]["result"] == "surjective"


def test_parse_helpers():
    assert _parse_moduli("2-4,7") == [2, 3, 4, 7]
    assert [p.to_json() for p in _parse_points("1/3,1/7; -2,0")] == [["1/3", "1/7"], ["-2/1", "0/1"]]


def test_version_and_usage(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    with pytest.raises(SystemExit) as info:
        main(["certify", "--power-budget", "0"])
    assert info.value.code == 2


def test_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "affine_pingpong.cli", "gap", "--moduli", "3"], capture_output=True, text=True)
    assert proc.returncode == 0 and "\n3\t9\t" in proc.stdout


def _outputs(tmp_path, tag, argv):
    out = tmp_path / f"{tag}.out"
    assert main([str(a) for a in argv] + ["-o", str(out)]) == 0
    return {p.name.replace(tag, "X"): p.read_bytes() for p in sorted(tmp_path.glob(f"{tag}*"))}


@pytest.mark.parametrize(
    "argv",
    [
        ["certify", "-i", SHIFTED, "--eta-mode", "data"],
        ["gap", "--moduli", "3-5"],
        ["quotient-check", "-i", SHIFTED, "--moduli", "3", "--herz-max", "3"],
    ],
    ids=["certify", "gap", "quotient-check"],
)
def test_byte_identical_reruns(tmp_path, argv):
    first = _outputs(tmp_path, "one", argv)
    second = _outputs(tmp_path, "two", argv)
    assert first == second and first


def test_byte_identical_certificate_commands(cert_file, tmp_path):
    for argv in (
        ["recheck", "-i", cert_file],
        ["paradox", "-i", cert_file, "--orbit-radius", 3],
        ["free-check", "-i", cert_file, "--lfree", 3, "--lcomm", 2, "--sample-length", 1, "--random-points", 5],
    ):
        first = _outputs(tmp_path, f"a{argv[0]}", argv)
        second = _outputs(tmp_path, f"b{argv[0]}", argv)
        assert first == second and first
