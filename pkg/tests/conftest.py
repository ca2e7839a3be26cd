import random

import pytest

ACCEPTANCE_RESULTS = []


@pytest.fixture
def rng():
    return random.Random(20260817)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_RESULTS:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)
