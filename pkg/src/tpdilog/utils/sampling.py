"""
Seeded random inputs for verification trials.

Every random value in a campaign comes from a `random.Random` derived from
the campaign seed plus the trial index.
"""

import random
from fractions import Fraction

from ..core import DiagonalMatrix, JacobiCoords, SquareMatrix, jacobi_to_matrix, pairs

DEFAULT_COORD_MAX = 10


def trial_rng(seed: int, index: int) -> random.Random:
    return random.Random(seed + index)


def random_rational(rng: random.Random, coord_max: int = DEFAULT_COORD_MAX) -> Fraction:
    """p/q with p, q uniform in [1, coord_max]."""
    return Fraction(rng.randint(1, coord_max), rng.randint(1, coord_max))


def random_coords(n: int, rng: random.Random, coord_max: int = DEFAULT_COORD_MAX) -> JacobiCoords:
    return JacobiCoords(n, tuple(random_rational(rng, coord_max) for _ in pairs(n)))


def random_diagonal(n: int, rng: random.Random, coord_max: int = DEFAULT_COORD_MAX) -> DiagonalMatrix:
    return DiagonalMatrix.from_entries(random_rational(rng, coord_max) for _ in range(n))


def random_b_matrix(n: int, rng: random.Random, coord_max: int = DEFAULT_COORD_MAX) -> SquareMatrix:
    """Λ₁ M Λ₂ with M from random coordinates and random positive diagonals."""
    left = random_diagonal(n, rng, coord_max)
    M = jacobi_to_matrix(random_coords(n, rng, coord_max))
    right = random_diagonal(n, rng, coord_max)
    return left @ M @ right


def random_square_matrix(n: int, rng: random.Random, coord_max: int = DEFAULT_COORD_MAX) -> SquareMatrix:
    """Dense matrix with signed entries p/q, |p| <= coord_max."""
    return SquareMatrix.from_function(
        n, lambda i, j: Fraction(rng.randint(-coord_max, coord_max), rng.randint(1, coord_max))
    )


def coords_with_zero_delta(rng: random.Random, coord_max: int = DEFAULT_COORD_MAX) -> JacobiCoords:
    """n=4 coordinates with x_24 x_34 = x_12 x_13."""
    values = {pair: random_rational(rng, coord_max) for pair in pairs(4)}
    values[(2, 4)] = values[(1, 2)] * values[(1, 3)] / values[(3, 4)]
    return JacobiCoords.from_mapping(4, values)


def coords_with_positive_delta(rng: random.Random, coord_max: int = DEFAULT_COORD_MAX) -> JacobiCoords:
    """n=4 coordinates with x_24 x_34 > x_12 x_13."""
    values = {pair: random_rational(rng, coord_max) for pair in pairs(4)}
    values[(2, 4)] = values[(1, 2)] * values[(1, 3)] / values[(3, 4)] + random_rational(rng, coord_max)
    return JacobiCoords.from_mapping(4, values)
