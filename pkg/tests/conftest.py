import numpy as np
import pytest

from bosonbound.linalg import haar_random_unitary


@pytest.fixture
def beamsplitter():
    """Exact 50/50 beamsplitter."""
    return np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)


@pytest.fixture
def haar():
    return haar_random_unitary


# acceptance lines collected by tests/test_acceptance.py
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
