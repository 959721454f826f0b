import os

import numpy as np
import pytest

from hemicontact.problem import E5, DiscreteProblem

SEED = int(os.environ.get("HEMI_SEED", "12345"))

#: pass/fail lines collected by the acceptance tests, echoed at session end
acceptance_lines: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture(scope="session")
def e5_problem_8():
    return DiscreteProblem(E5, h_denominator=8)


@pytest.fixture(scope="session")
def e5_problem_16():
    return DiscreteProblem(E5, h_denominator=16)


@pytest.fixture
def record_criterion():
    def _record(number: int, name: str, passed: bool, detail: str = ""):
        verdict = "PASS" if passed else "FAIL"
        line = f"criterion {number} [{verdict}] {name}" + (f": {detail}" if detail else "")
        acceptance_lines.append(line)
        print(line)
        return passed
    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(acceptance_lines):
            terminalreporter.write_line(line)
