import random
from fractions import Fraction

import pytest

from conftest import SEEDS
from tpdilog.core import (
    InvalidCoordinatesError,
    InvalidIndexError,
    JacobiCoords,
    NotTotallyPositiveError,
    NotUpperTriangularError,
    SingularMatrixError,
    SquareMatrix,
    all_index_sets,
    bar_set,
    corner_minor,
    corner_minor_product,
    determinant_cofactor,
    determinant_exact,
    find_nonpositive_minor,
    flag_minor_right,
    flag_minor_upper,
    interval,
    inverse,
    is_totally_positive,
    jacobi_to_matrix,
    matrix_to_jacobi,
    minor,
    pairs,
    require_totally_positive,
    reverse_coords,
    sign_conjugate_inverse,
    triples,
    union,
    validate_triple,
)
from tpdilog.utils.sampling import random_coords, random_square_matrix


def test_index_helpers():
    assert interval(2, 4) == (2, 3, 4)
    assert interval(3, 2) == ()
    assert union((1, 2), (), (5,)) == (1, 2, 5)
    assert bar_set((1, 2), 4) == (3, 4)
    assert len(list(all_index_sets(4))) == 15
    assert pairs(3) == ((1, 2), (1, 3), (2, 3))
    assert triples(4) == ((1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4))
    assert len(triples(6)) == 20


def test_validate_triple_rejects_bad_order():
    with pytest.raises(InvalidIndexError):
        validate_triple((2, 1, 3), 4)
    with pytest.raises(InvalidIndexError):
        validate_triple((1, 2, 5), 4)


def test_jacobi_coords_must_be_positive():
    with pytest.raises(InvalidCoordinatesError):
        JacobiCoords(3, (1, 0, 2))
    with pytest.raises(InvalidCoordinatesError):
        JacobiCoords(3, (1, 2))
    with pytest.raises(InvalidCoordinatesError):
        JacobiCoords.from_mapping(3, {(1, 2): 1, (1, 3): 1})


def test_jacobi_to_matrix_n3(coords3):
    M = jacobi_to_matrix(coords3)
    # [[1, x12 + x23, x12 x13], [0, 1, x13], [0, 0, 1]]
    assert M.rows == ((1, 7, 6), (0, 1, 3), (0, 0, 1))


def test_all_coordinates_equal():
    M = jacobi_to_matrix(JacobiCoords.constant(3, 2))
    assert M.rows == ((1, 4, 4), (0, 1, 2), (0, 0, 1))


def test_minimal_dimension():
    M = jacobi_to_matrix(JacobiCoords(2, (Fraction(3, 2),)))
    assert M.rows == ((1, Fraction(3, 2)), (0, 1))
    assert matrix_to_jacobi(M).values == (Fraction(3, 2),)


@pytest.mark.parametrize("seed", SEEDS)
@pytest.mark.parametrize("n", [2, 3, 5, 7])
def test_round_trip(seed, n):
    coords = random_coords(n, random.Random(seed))
    assert matrix_to_jacobi(jacobi_to_matrix(coords)) == coords


@pytest.mark.parametrize("seed", SEEDS)
def test_jacobi_matrix_is_totally_positive(seed):
    for n in (3, 4, 5, 7):
        assert is_totally_positive(jacobi_to_matrix(random_coords(n, random.Random(seed))))


def test_nonpositive_minor_is_named():
    M = SquareMatrix(((1, 1, 1), (0, 1, 1), (0, 0, 1)))
    # Δ_{1,2}^{2,3} = 1*1 - 1*1 = 0
    assert find_nonpositive_minor(M) is not None
    with pytest.raises(NotTotallyPositiveError) as info:
        require_totally_positive(M)
    assert info.value.minor.startswith("Δ_")


def test_lower_triangular_entries_rejected():
    with pytest.raises(NotUpperTriangularError):
        is_totally_positive(SquareMatrix(((1, 0), (1, 1))))


def test_vanishing_corner_minor_rejected():
    M = SquareMatrix(((1, 1, 1), (0, 1, 1), (0, 0, 1)))
    with pytest.raises(NotTotallyPositiveError):
        matrix_to_jacobi(M)


@pytest.mark.parametrize("seed", SEEDS)
def test_determinant_agrees_with_cofactor_expansion(seed):
    rng = random.Random(seed)
    for n in (1, 2, 3, 5):
        A = random_square_matrix(n, rng)
        assert determinant_exact(A) == determinant_cofactor(A)


def test_inverse_and_singular():
    A = SquareMatrix(((2, 1), (5, 3)))
    assert A @ inverse(A) == SquareMatrix.identity(2)
    with pytest.raises(SingularMatrixError):
        inverse(SquareMatrix(((1, 2), (2, 4))))


def test_minor_conventions(coords3):
    M = jacobi_to_matrix(coords3)
    assert minor(M, (), ()) == 1
    assert flag_minor_right(M, (1,)) == M[(1, 3)]
    assert flag_minor_upper(M, (3,)) == M[(1, 3)]
    with pytest.raises(InvalidIndexError):
        minor(M, (1, 2), (3,))


@pytest.mark.parametrize("seed", SEEDS)
def test_corner_minor_products(seed):
    coords = random_coords(5, random.Random(seed))
    M = jacobi_to_matrix(coords)
    for a in range(1, 6):
        for b in range(a, 6):
            assert corner_minor(M, a, b) == corner_minor_product(coords, a, b)


@pytest.mark.parametrize("seed", SEEDS)
def test_sign_conjugate_inverse_reverses_coordinates(seed):
    coords = random_coords(4, random.Random(seed))
    image = sign_conjugate_inverse(jacobi_to_matrix(coords))
    assert is_totally_positive(image)
    assert matrix_to_jacobi(image) == reverse_coords(coords)
    assert reverse_coords(reverse_coords(coords)) == coords
