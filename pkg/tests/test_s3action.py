import random
from fractions import Fraction

import pytest

from conftest import SEEDS
from tpdilog.core import InvalidIndexError, JacobiCoords, jacobi_to_matrix
from tpdilog.involutions import jacobi_prime
from tpdilog.s3action import (
    constraint_indices,
    dp_square_is_scalar,
    mrho_d_criterion,
    project_to_tilde,
    q_inversion_holds,
    q_values,
    q_values_corner,
    q_values_upper,
    ratio_pairs,
    s3_action_failures,
    verify_mrho,
    verify_s3_action,
    y_ratio,
    y_ratio_bar,
    y_ratio_law_failures,
)
from tpdilog.utils.sampling import random_coords

WITNESS = JacobiCoords.constant(4).replace({(1, 2): 2})


def test_constraint_indices():
    assert list(constraint_indices(3)) == [1]
    assert list(constraint_indices(4)) == [1]
    assert list(constraint_indices(5)) == [1, 2]
    assert list(constraint_indices(2)) == []


def test_q_values_of_witness():
    q = q_values(WITNESS)
    assert q.as_dict() == {1: 2}
    assert not q.is_tilde
    assert q_values_upper(WITNESS) == {2: Fraction(1, 2), 3: Fraction(1, 2)}
    with pytest.raises(InvalidIndexError):
        q[2]


@pytest.mark.parametrize("seed", SEEDS)
@pytest.mark.parametrize("n", [4, 5, 6])
def test_corner_form_of_q(seed, n):
    coords = random_coords(n, random.Random(seed))
    assert q_values_corner(jacobi_to_matrix(coords)) == q_values(coords)


@pytest.mark.parametrize("seed", SEEDS)
@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_projection_lands_on_subvariety(seed, n):
    tilde = project_to_tilde(random_coords(n, random.Random(seed)))
    assert q_values(tilde).is_tilde
    assert all(v == 1 for v in q_values_upper(tilde).values())
    assert project_to_tilde(tilde) == tilde


@pytest.mark.parametrize("seed", SEEDS)
@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_s3_action_on_subvariety(seed, n):
    tilde = project_to_tilde(random_coords(n, random.Random(seed)))
    assert verify_mrho(tilde)
    assert verify_mrho(jacobi_to_matrix(tilde))
    assert mrho_d_criterion(tilde)
    assert dp_square_is_scalar(tilde)
    assert s3_action_failures(tilde) == []
    assert verify_s3_action(jacobi_prime(tilde))


def test_witness_breaks_s3_relation():
    assert not verify_mrho(WITNESS)
    assert "point is not in Ñ_n^+" in s3_action_failures(WITNESS)


@pytest.mark.parametrize("seed", SEEDS)
def test_q_inversion(seed):
    assert q_inversion_holds(random_coords(5, random.Random(seed)))


@pytest.mark.parametrize("seed", SEEDS)
@pytest.mark.parametrize("n", [3, 4, 5])
def test_y_ratio_laws(seed, n):
    assert y_ratio_law_failures(random_coords(n, random.Random(seed))) == []


def test_y_ratio_values(coords4):
    assert y_ratio(coords4, 1, 2) == coords4[(1, 2)] / coords4[(2, 3)]
    assert y_ratio_bar(coords4, 1, 3) == coords4[(2, 4)] / coords4[(1, 3)]
    assert ratio_pairs(4) == [(1, 2), (1, 3), (2, 3)]
    with pytest.raises(InvalidIndexError):
        y_ratio(coords4, 1, 4)
