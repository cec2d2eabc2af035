import numpy as np
import pytest

import corpus
from quadlines.quadrics import QuadricParams

ACCEPTANCE = {}


@pytest.fixture(scope="session")
def corpus_params():
    return corpus.load()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def example_params():
    return QuadricParams((1, 2, 3, 4, 5, 6), (5, 2, 1))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[number])
