"""Shared test helpers plus the acceptance-criteria summary printer."""

import numpy as np
import pytest

# criterion number -> (passed, detail) recorded by tests/test_acceptance.py
ACCEPTANCE_RESULTS = {}


def record_criterion(number, passed, detail=""):
    prev = ACCEPTANCE_RESULTS.get(number)
    if prev is not None:
        passed = passed and prev[0]
        detail = "; ".join(x for x in (prev[1], detail) if x)
    ACCEPTANCE_RESULTS[number] = (passed, detail)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        passed, detail = ACCEPTANCE_RESULTS[number]
        status = "PASS" if passed else "FAIL"
        line = f"criterion {number:2d}: {status}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
