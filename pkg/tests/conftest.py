import itertools

import pytest

from kratzer_spectra.model import RadialProblem

# criterion id -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[str, tuple[bool, str]] = {}

SWEEP = list(itertools.product([0.5, 1.0, 2.0], [0.0, 0.5, 1.0], [0, 1], [0, 1]))


@pytest.fixture
def problem_b1():
    return RadialProblem.from_params(1.0, 1.0, 0)


@pytest.fixture
def coulomb():
    return RadialProblem.from_params(1.0, 0.0, 0)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k.split()[0])):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")
