"""
The involutions M -> M', M -> M'' of N_n^+ and their relatives.

M' and M'' come from the Gauss-type decomposition P M P = M' P D_M M''.
Each has a closed form in Jacobi coordinates, and both are checked against
elimination. Also here: the bar involution, the maps G -> Ǧ and G -> Ĝ on
B_n^+, and the BFZ twist.
"""

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple

from .core import (
    DiagonalMatrix,
    IndexSet,
    InvalidIndexError,
    JacobiCoords,
    NotTotallyPositiveError,
    NotUpperTriangularError,
    SquareMatrix,
    UpperUnitriangular,
    all_index_sets,
    as_unitriangular,
    bar_set,
    flag_minor_right,
    flag_minor_upper,
    inverse,
    jacobi_to_matrix,
    matrix_to_jacobi,
    pairs,
    permutation_w0,
    require_totally_positive,
    w0_conjugate,
)
from .utils.sampling import random_coords

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GaussTriple:
    """Factors of P M P = M' P D_M M''."""

    m_prime: UpperUnitriangular
    d: DiagonalMatrix
    m_dprime: UpperUnitriangular


def ldu_decompose(A: SquareMatrix) -> Tuple[SquareMatrix, DiagonalMatrix, UpperUnitriangular]:
    """
    Exact A = L D U with L unit lower triangular and U unit upper triangular.

    No pivoting: a vanishing leading principal minor means the input came
    from outside the totally positive stratum.
    """
    n = A.n
    upper = [list(row) for row in A.rows]
    lower = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(n):
        pivot = upper[k][k]
        if pivot == 0:
            raise NotTotallyPositiveError(
                f"leading principal minor of order {k + 1} vanishes", minor=f"Δ_[1,{k + 1}]^[1,{k + 1}]"
            )
        for i in range(k + 1, n):
            factor = upper[i][k] / pivot
            lower[i][k] = factor
            if factor:
                upper[i] = [u - factor * p for u, p in zip(upper[i], upper[k])]
    d = [upper[k][k] for k in range(n)]
    unit_upper = tuple(tuple(upper[i][j] / d[i] for j in range(n)) for i in range(n))
    return SquareMatrix(tuple(tuple(row) for row in lower)), DiagonalMatrix.from_entries(d), UpperUnitriangular(unit_upper)


def decompose_gauss(M: SquareMatrix) -> GaussTriple:
    """LDU of M P, repackaged as (M', D_M, M'')."""
    M = as_unitriangular(M)
    lower, d, upper = ldu_decompose(M @ permutation_w0(M.n))
    return GaussTriple(m_prime=as_unitriangular(w0_conjugate(lower)), d=d, m_dprime=upper)


# ----------------------------
# Closed forms in Jacobi coordinates
# ----------------------------
def _product(values: Iterable[Fraction]) -> Fraction:
    result = Fraction(1)
    for value in values:
        result *= value
    return result


def jacobi_prime(coords: JacobiCoords) -> JacobiCoords:
    n = coords.n
    x = coords.__getitem__
    return JacobiCoords.from_mapping(n, {
        (i, j): _product(x((k, n + i - j)) for k in range(1, i))
        / _product(x((k, n + 1 + i - j)) for k in range(1, i + 1))
        for i, j in pairs(n)
    })


def jacobi_dprime(coords: JacobiCoords) -> JacobiCoords:
    n = coords.n
    x = coords.__getitem__
    return JacobiCoords.from_mapping(n, {
        (i, j): _product(x((j + 1 - i, k)) for k in range(j + 1, n + 1))
        / _product(x((j - i, k)) for k in range(j, n + 1))
        for i, j in pairs(n)
    })


def d_matrix(coords: JacobiCoords) -> DiagonalMatrix:
    """D_M with (D_M)_ii = (-1)^(i-1) prod_{k>i} x_ik / prod_{k<i} x_ki."""
    n = coords.n
    return DiagonalMatrix.from_entries(
        (-1) ** (i - 1)
        * _product(coords[(i, k)] for k in range(i + 1, n + 1))
        / _product(coords[(k, i)] for k in range(1, i))
        for i in range(1, n + 1)
    )


def bar(coords: JacobiCoords) -> JacobiCoords:
    return JacobiCoords(coords.n, tuple(1 / v for v in coords.values))


def prime(M: SquareMatrix) -> UpperUnitriangular:
    """M' through the coordinate closed form."""
    return jacobi_to_matrix(jacobi_prime(matrix_to_jacobi(M)))


def dprime(M: SquareMatrix) -> UpperUnitriangular:
    """M'' through the coordinate closed form."""
    return jacobi_to_matrix(jacobi_dprime(matrix_to_jacobi(M)))


def triple_prime_closed_form(M: SquareMatrix) -> SquareMatrix:
    """((M')'')' = P D_M P M^-1 P D_M^-1 P."""
    d = d_matrix(matrix_to_jacobi(M))
    return w0_conjugate(d) @ inverse(M) @ w0_conjugate(d.inverse())


def triple_dprime_closed_form(M: SquareMatrix) -> SquareMatrix:
    """((M'')')'' = D_M^-1 M^-1 D_M."""
    d = d_matrix(matrix_to_jacobi(M))
    return d.inverse() @ inverse(M) @ d


# ----------------------------
# The maps on B_n^+
# ----------------------------
def _positive_diagonal(G: SquareMatrix) -> Tuple[Fraction, ...]:
    if not G.is_upper_triangular():
        raise NotUpperTriangularError("element of B_n must be upper triangular")
    diagonal = G.diagonal_entries()
    if any(v <= 0 for v in diagonal):
        raise NotTotallyPositiveError("diagonal of G must be positive")
    return diagonal


def split_right_diagonal(G: SquareMatrix) -> Tuple[UpperUnitriangular, DiagonalMatrix]:
    """G = M Λ with Λ read off the diagonal."""
    lam = _positive_diagonal(G)
    M = SquareMatrix.from_function(G.n, lambda i, j: G[(i, j)] / lam[j - 1])
    return as_unitriangular(M), DiagonalMatrix.from_entries(lam)


def split_left_diagonal(G: SquareMatrix) -> Tuple[DiagonalMatrix, UpperUnitriangular]:
    """G = Λ M with Λ read off the diagonal."""
    lam = _positive_diagonal(G)
    M = SquareMatrix.from_function(G.n, lambda i, j: G[(i, j)] / lam[i - 1])
    return DiagonalMatrix.from_entries(lam), as_unitriangular(M)


def _abs_d(coords: JacobiCoords) -> DiagonalMatrix:
    return DiagonalMatrix.from_entries(abs(v) for v in d_matrix(coords).diagonal_entries())


def check_g(G: SquareMatrix) -> SquareMatrix:
    """Ǧ = M' Λ P D̃_M P for G = M Λ."""
    require_totally_positive(G)
    M, lam = split_right_diagonal(G)
    coords = matrix_to_jacobi(M)
    return jacobi_to_matrix(jacobi_prime(coords)) @ lam @ w0_conjugate(_abs_d(coords))


def hat_g(G: SquareMatrix) -> SquareMatrix:
    """Ĝ = Λ D̃_M M'' for G = Λ M."""
    require_totally_positive(G)
    lam, M = split_left_diagonal(G)
    coords = matrix_to_jacobi(M)
    return lam @ _abs_d(coords) @ jacobi_to_matrix(jacobi_dprime(coords))


def flag_relabel_mismatches(
    G: SquareMatrix, image: SquareMatrix, side: str, index_sets: Optional[Iterable[IndexSet]] = None
) -> List[IndexSet]:
    """
    Index sets where the relabeling Δ_I(image) = Δ_Ī(G) (side "right") or
    Δ^J(image) = Δ^J̄(G) (side "upper") fails.
    """
    if side == "right":
        flag = flag_minor_right
    elif side == "upper":
        flag = flag_minor_upper
    else:
        raise InvalidIndexError(f"unknown flag side: {side}")
    n = G.n
    sets = all_index_sets(n) if index_sets is None else index_sets
    return [I for I in sets if flag(image, I) != flag(G, bar_set(I, n))]


# ----------------------------
# BFZ twist
# ----------------------------
def bfz_twist(z: SquareMatrix) -> UpperUnitriangular:
    """η(z) = u where P zᵗ = vᵗ d u."""
    z = as_unitriangular(z)
    _, _, u = ldu_decompose(permutation_w0(z.n) @ z.transpose())
    return u


def find_twist_witness(rng: random.Random, n: int = 3, attempts: int = 100, coord_max: int = 10) -> Optional[UpperUnitriangular]:
    """Search for M with η(η(M)) != M."""
    for attempt in range(attempts):
        M = jacobi_to_matrix(random_coords(n, rng, coord_max))
        if bfz_twist(bfz_twist(M)) != M:
            logger.debug(f"Twist witness found after {attempt + 1} attempts")
            return M
    logger.warning(f"No twist witness found in {attempts} attempts")
    return None
