from __future__ import annotations

import re
import sys

import numpy as np
import pytest


def random_spd(rng: np.random.Generator, d: int, lo: float = 0.5, hi: float = 2.0) -> np.ndarray:
    """Seeded SPD matrix with spectrum drawn uniformly from [lo, hi]."""
    Q, _ = np.linalg.qr(rng.normal(size=(d, d)))
    spec = rng.uniform(lo, hi, size=d)
    A = Q @ np.diag(spec) @ Q.T
    return (A + A.T) / 2.0


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260815)


# ---------------------------------------------------------------------------
# acceptance reporting: one pass/fail line per criterion in the summary

_CRITERION_RE = re.compile(r"test_acceptance\.py::test_(criterion_\d+\w*)")
_acceptance_results: list[tuple[int, str, str]] = []


def pytest_runtest_logreport(report):
    match = _CRITERION_RE.search(report.nodeid)
    if match is None:
        return
    if report.when == "call" or (report.when == "setup" and report.skipped):
        if hasattr(report, "wasxfail"):
            status = "XFAIL (documented unattainable)" if report.skipped else "XPASS"
        elif report.skipped:
            status = "SKIP"
        elif report.passed:
            status = "PASS"
        else:
            status = "FAIL"
        name = match.group(1)
        number = int(name.split("_")[1])
        _acceptance_results.append((number, name, status))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    module = sys.modules.get("test_acceptance")
    details = getattr(module, "DETAILS", {}) if module else {}
    terminalreporter.section("acceptance criteria")
    for number, name, status in sorted(_acceptance_results):
        line = f"criterion {number}: {status}  [{name}]"
        extra = details.get(f"test_{name}")
        if extra:
            line += f"  -- {extra}"
        terminalreporter.write_line(line)
