import math

import numpy as np
import pytest

from matasymp import oracle

ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])


@pytest.fixture(scope="session")
def herm3():
    return oracle.generate(oracle.MatrixFamily("hermitian_pd", 3, 1.0, 5.0, seed=101), 5)


@pytest.fixture(scope="session")
def normal4():
    fam = oracle.MatrixFamily("normal_sectorial", 4, 1.0, 2.0, math.pi / 4, seed=202)
    return oracle.generate(fam, 5)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
