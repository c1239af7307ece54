import random
from fractions import Fraction

import pytest

from conftest import SEEDS
from tpdilog.core import (
    DiagonalMatrix,
    JacobiCoords,
    NotTotallyPositiveError,
    SquareMatrix,
    jacobi_to_matrix,
    matrix_to_jacobi,
    permutation_w0,
    w0_conjugate,
)
from tpdilog.involutions import (
    bar,
    bfz_twist,
    check_g,
    d_matrix,
    decompose_gauss,
    dprime,
    find_twist_witness,
    flag_relabel_mismatches,
    hat_g,
    jacobi_dprime,
    jacobi_prime,
    prime,
    split_left_diagonal,
    split_right_diagonal,
    triple_dprime_closed_form,
    triple_prime_closed_form,
)
from tpdilog.identities import S3Word, s3_value
from tpdilog.utils.sampling import random_b_matrix, random_coords


def test_n2_by_hand():
    coords = JacobiCoords(2, (Fraction(3),))
    assert jacobi_prime(coords).values == (Fraction(1, 3),)
    assert d_matrix(coords) == DiagonalMatrix.from_entries([3, Fraction(-1, 3)])


def test_n3_closed_forms(coords3):
    a, b, c = Fraction(2), Fraction(3), Fraction(5)
    assert jacobi_prime(coords3).x == {(1, 2): 1 / b, (1, 3): 1 / a, (2, 3): a / (b * c)}
    assert jacobi_dprime(coords3).x == {(1, 2): c / (a * b), (1, 3): 1 / c, (2, 3): 1 / b}
    assert d_matrix(coords3).diagonal_entries() == (a * b, -c / a, 1 / (b * c))


@pytest.mark.parametrize("seed", SEEDS)
@pytest.mark.parametrize("n", [2, 3, 4, 6, 8])
def test_involutive(seed, n):
    coords = random_coords(n, random.Random(seed))
    assert jacobi_prime(jacobi_prime(coords)) == coords
    assert jacobi_dprime(jacobi_dprime(coords)) == coords
    assert bar(bar(coords)) == coords


@pytest.mark.parametrize("seed", SEEDS)
@pytest.mark.parametrize("n", [2, 3, 5, 7])
def test_closed_form_matches_elimination(seed, n):
    coords = random_coords(n, random.Random(seed))
    M = jacobi_to_matrix(coords)
    gauss = decompose_gauss(M)
    assert matrix_to_jacobi(gauss.m_prime) == jacobi_prime(coords)
    assert matrix_to_jacobi(gauss.m_dprime) == jacobi_dprime(coords)
    assert gauss.d == d_matrix(coords)
    assert w0_conjugate(M) == gauss.m_prime @ permutation_w0(n) @ gauss.d @ gauss.m_dprime


@pytest.mark.parametrize("seed", SEEDS)
def test_d_matrix_properties(seed):
    coords = random_coords(5, random.Random(seed))
    d = d_matrix(coords)
    product = 1
    for v in d.diagonal_entries():
        product *= v
    assert abs(product) == 1
    assert d_matrix(jacobi_prime(coords)) == d.inverse()
    assert d_matrix(jacobi_dprime(coords)) == d.inverse()
    signs = [1 if v > 0 else -1 for v in d.diagonal_entries()]
    assert signs == [(-1) ** i for i in range(5)]


def test_bar_commutes_with_prime(coords4):
    assert bar(jacobi_prime(coords4)) == jacobi_prime(bar(coords4))
    assert bar(JacobiCoords.constant(4)) == JacobiCoords.constant(4)


@pytest.mark.parametrize("seed", SEEDS)
def test_triple_closed_forms(seed):
    M = jacobi_to_matrix(random_coords(4, random.Random(seed)))
    assert s3_value(M, S3Word((1, 2, 1))) == triple_prime_closed_form(M)
    assert s3_value(M, S3Word((2, 1, 2))) == triple_dprime_closed_form(M)


@pytest.mark.parametrize("seed", SEEDS)
def test_check_g_and_hat_g_relabel_flag_minors(seed):
    G = random_b_matrix(4, random.Random(seed))
    g_check = check_g(G)
    g_hat = hat_g(G)
    assert flag_relabel_mismatches(G, g_check, "right") == []
    assert flag_relabel_mismatches(G, g_hat, "upper") == []
    assert check_g(g_check) == G
    assert hat_g(g_hat) == G


def test_check_g_with_trivial_diagonal(coords4):
    M = jacobi_to_matrix(coords4)
    d_abs = DiagonalMatrix.from_entries(abs(v) for v in d_matrix(coords4).diagonal_entries())
    assert check_g(M) == prime(M) @ w0_conjugate(d_abs)


def test_split_diagonals():
    G = random_b_matrix(3, random.Random(5))
    M, lam = split_right_diagonal(G)
    assert M @ lam == G
    lam, M = split_left_diagonal(G)
    assert lam @ M == G


def test_check_g_rejects_non_tp():
    G = SquareMatrix(((1, 1, 1), (0, 1, 1), (0, 0, 1)))
    with pytest.raises(NotTotallyPositiveError):
        check_g(G)


@pytest.mark.parametrize("seed", SEEDS)
@pytest.mark.parametrize("n", [3, 4, 6])
def test_bfz_twist_relations(seed, n):
    M = jacobi_to_matrix(random_coords(n, random.Random(seed)))
    assert prime(M) == w0_conjugate(bfz_twist(M).transpose())
    assert dprime(M) == bfz_twist(w0_conjugate(M.transpose()))


def test_bfz_twist_is_not_involutive():
    witness = find_twist_witness(random.Random(0))
    assert witness is not None
    assert bfz_twist(bfz_twist(witness)) != witness
