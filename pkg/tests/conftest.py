import numpy as np
import pytest

from dualmat.dmatrix import DualMatrix
from dualmat.io import load_fixture

# printed inverses of the worked examples, transcribed entry by entry
MP_EXAMPLE = DualMatrix(
    np.diag([1.0, 0.5, 0.0, 0.0]),
    [[-1.0, 1.5, -1.0, 1.0],
     [-1.5, -0.25, 0.5, -0.5],
     [0.0, -1.0, 0.0, 0.0],
     [-3.0, -0.5, 0.0, 0.0]],
)
GROUP_EXAMPLE = DualMatrix(
    np.diag([1 / 2, 1 / 3, 0.0]),
    [[-3 / 4, 1 / 6, -3 / 2],
     [-2 / 3, -4 / 9, 1 / 3],
     [-3 / 2, 0.0, 0.0]],
)
CORE_EXAMPLE = DualMatrix(
    np.diag([1 / 2, 1 / 3, 0.0]),
    [[-3 / 4, 1 / 6, -3 / 2],
     [-2 / 3, -4 / 9, 0.0],
     [-3 / 2, 0.0, 0.0]],
)
# the dual unitary factor printed for the first 4x4 example
U_EXAMPLE = DualMatrix(
    np.eye(4),
    [[0, -1, 1, -1],
     [1, 0, -1, 1],
     [-1, 1, 0, -1],
     [1, -1, 1, 0]],
)
V_EXAMPLE = DualMatrix(
    np.eye(4),
    [[0, 1, 0, 3],
     [-1, 0, 2, 1],
     [0, -2, 0, 1],
     [-3, -1, -1, 0]],
)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def ex31():
    return load_fixture("example_3_1")


@pytest.fixture(scope="session")
def ex32():
    return load_fixture("example_3_2")


@pytest.fixture(scope="session")
def ex4():
    return load_fixture("example_4_dggi")
