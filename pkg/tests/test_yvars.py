import random
from fractions import Fraction

import pytest

from conftest import SEEDS
from tpdilog.core import InvalidIndexError, determinant_exact, jacobi_to_matrix, triples
from tpdilog.utils.sampling import random_coords, random_square_matrix
from tpdilog.yvars import (
    YFamily,
    desnanot_sides,
    m_x,
    m_x_entry,
    mirror_triple,
    mx_y_value,
    plucker_sides,
    scaled_mx_minor,
    scaled_mx_minor_formula,
    toeplitz_det,
    toeplitz_matrix,
    y_index_sets,
    y_relation_failures,
    y_relations_check,
    y_value,
    y_values,
)


def test_y_values_are_positive(matrix4):
    for family in YFamily:
        values = y_values(matrix4, family)
        assert list(values) == list(triples(4))
        assert all(v > 0 for v in values.values())


def test_index_sets_validate_triple():
    with pytest.raises(InvalidIndexError):
        y_index_sets(YFamily.Y_LOWER, (1, 1, 3), 4)


def test_mirror_triple():
    assert mirror_triple((1, 2, 4), 5) == (2, 4, 5)
    assert mirror_triple(mirror_triple((1, 3, 4), 6), 6) == (1, 3, 4)


@pytest.mark.parametrize("seed", SEEDS)
@pytest.mark.parametrize("n", [3, 4, 5])
def test_y_relations(seed, n):
    M = jacobi_to_matrix(random_coords(n, random.Random(seed)))
    assert y_relation_failures(M) == []
    assert y_relations_check(M)


@pytest.mark.parametrize("upper", [False, True])
def test_plucker_relation(matrix4, upper):
    M = jacobi_to_matrix(random_coords(5, random.Random(3)))
    lhs, rhs = plucker_sides(M, (2,), (1, 3, 4), upper=upper)
    assert lhs == rhs
    lhs, rhs = plucker_sides(matrix4, (), (1, 2, 3), upper=upper)
    assert lhs == rhs


def test_plucker_rejects_overlapping_set(matrix4):
    with pytest.raises(InvalidIndexError):
        plucker_sides(matrix4, (2,), (1, 2, 3))


def test_m_x_entries():
    M = m_x(4, 1)
    assert M.rows[0] == (1, 3, 3, 1)
    x = Fraction(2, 3)
    M = m_x(5, x)
    for i in range(1, 6):
        for j in range(1, 6):
            assert M[(i, j)] == m_x_entry(5, x, i, j)


@pytest.mark.parametrize("x", [0, -1])
def test_m_x_needs_positive_x(x):
    with pytest.raises(ValueError):
        m_x(3, x)


@pytest.mark.parametrize("x", [Fraction(1, 2), 1, 3])
def test_m_x_y_values_do_not_depend_on_x(x):
    M = m_x(5, x)
    for family in YFamily:
        for t in triples(5):
            assert y_value(M, family, t) == mx_y_value(family, t)
    assert mx_y_value(YFamily.Y_LOWER, (1, 2, 4)) == 2
    assert mx_y_value(YFamily.Y_UPPER, (1, 2, 4)) == Fraction(1, 2)


def test_toeplitz_determinants():
    assert toeplitz_det(1, 1) == Fraction(1, 2)
    assert toeplitz_det(3, -1) == 1
    assert toeplitz_det(0, 0) == 1
    for k in range(4):
        for m in range(4):
            assert determinant_exact(toeplitz_matrix(k, m)) == toeplitz_det(k, m)
    with pytest.raises(ValueError):
        toeplitz_det(-1, 2)


def test_scaled_mx_minor():
    assert scaled_mx_minor(4, 1, 2, 4, 1) == 3
    assert scaled_mx_minor(4, 1, 2, 4, Fraction(7, 3)) == 3
    for a, b, c in ((1, 1, 3), (2, 3, 5), (1, 3, 6), (2, 2, 4)):
        assert scaled_mx_minor(5, a, b, c, 2) == scaled_mx_minor_formula(5, a, b, c)
    with pytest.raises(InvalidIndexError):
        scaled_mx_minor_formula(4, 3, 2, 4)


@pytest.mark.parametrize("seed", SEEDS)
def test_desnanot_identity(seed):
    rng = random.Random(seed)
    for size in (2, 3, 5):
        lhs, rhs = desnanot_sides(random_square_matrix(size, rng))
        assert lhs == rhs
