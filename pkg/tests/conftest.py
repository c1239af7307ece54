import random
import pytest

from tpdilog.core import JacobiCoords, jacobi_to_matrix
from tpdilog.dilog import get_engine
from tpdilog.utils.sampling import random_coords

SEEDS = [0, 1, 2, 3, 4]


@pytest.fixture
def engine():
    return get_engine(128)


@pytest.fixture
def coords3():
    """x12 = 2, x13 = 3, x23 = 5."""
    return JacobiCoords.from_mapping(3, {(1, 2): 2, (1, 3): 3, (2, 3): 5})


@pytest.fixture
def coords4():
    return random_coords(4, random.Random(11))


@pytest.fixture
def matrix4(coords4):
    return jacobi_to_matrix(coords4)


def tiny(value, bound=1e-25):
    """abs(value) < bound for mpf or Fraction values."""
    return abs(value) < bound
