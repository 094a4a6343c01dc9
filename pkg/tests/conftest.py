from __future__ import annotations

from pathlib import Path

import pytest

from affine_pingpong.arith import AffineElement, Mat2, parse_set, symmetrize
from affine_pingpong.pingpong import CertifyConfig, certify_pair

ROOT = Path(__file__).resolve().parents[1]
SETS = ROOT / "sets"

L = Mat2.sl2(1, 2, 0, 1)
R = Mat2.sl2(1, 0, 2, 1)


def load_set(name: str) -> list[AffineElement]:
    elems, _ = symmetrize(parse_set((SETS / name).read_text()))
    return elems


def symmetric(*gens: AffineElement) -> list[AffineElement]:
    elems, _ = symmetrize(gens)
    return elems


@pytest.fixture(scope="session")
def shifted_set() -> list[AffineElement]:
    return load_set("sanov_shifted.txt")


@pytest.fixture(scope="session")
def literal_set() -> list[AffineElement]:
    return load_set("sanov_lift.txt")


@pytest.fixture(scope="session")
def norm_cert(shifted_set):
    return certify_pair(shifted_set, CertifyConfig(eta_mode="norm"))


@pytest.fixture(scope="session")
def data_cert(shifted_set):
    return certify_pair(shifted_set, CertifyConfig(eta_mode="data"))


# --- acceptance reporting: one line per criterion -----------------------------

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when != "call" and not report.failed:
        return
    number, title = mark.args
    entry = _CRITERIA.setdefault((number, item.name), {"title": title, "ok": True, "seconds": 0.0})
    entry["ok"] = entry["ok"] and report.passed
    entry["seconds"] += report.duration


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for (number, name), entry in sorted(_CRITERIA.items()):
        status = "PASS" if entry["ok"] else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status}  {entry['title']}  [{name}, {entry['seconds']:.1f}s]")
