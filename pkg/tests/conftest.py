import numpy as np
import pytest
from hypothesis import strategies as st

from dgdual import BinaryMatrix

ZERO_DIAG_3 = [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
CHAIN = [[0, 1], [0, 0]]
CYCLE_3 = [[0, 1, 0], [0, 0, 1], [1, 0, 0]]
ALL_ONES_2 = [[1, 1], [1, 1]]
PATH_ABC = [[0, 1, 0], [0, 0, 1], [0, 0, 0]]


def mat(rows, labels=None):
    return BinaryMatrix.from_rows(rows, labels)


def random_matrices(count, max_n, seed, min_n=1, loops=True):
    """Deterministic batch with varied order and density."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(min_n, max_n + 1))
        cells = (rng.random((n, n)) < rng.random()).astype(int)
        if not loops:
            np.fill_diagonal(cells, 0)
        out.append(mat(cells))
    return out


@st.composite
def matrices(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    bits = draw(st.lists(st.integers(0, 1), min_size=n * n, max_size=n * n))
    return mat(np.array(bits).reshape(n, n))


@pytest.fixture
def zero_diag_3():
    return mat(ZERO_DIAG_3)


@pytest.fixture
def chain():
    return mat(CHAIN)


@pytest.fixture
def cycle_3():
    return mat(CYCLE_3)


@pytest.fixture
def all_ones_2():
    return mat(ALL_ONES_2)


@pytest.fixture
def path_abc():
    return mat(PATH_ABC, ["a", "b", "c"])


# one line per acceptance criterion, echoed after the run
CRITERIA_LINES: list[str] = []


def report_criterion(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    CRITERIA_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if CRITERIA_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA_LINES:
            terminalreporter.write_line(line)
