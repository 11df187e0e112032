import numpy as np
import pytest

from ellqg.theta import ModularParams

ACCEPTANCE_LINES = []


@pytest.fixture
def params():
    return ModularParams(tau=0.8j, eta=0.12 + 0.03j)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
