"""
The subvariety Ñ_n^+ on which ′ and ″ generate an S₃ action, and the
y-ratios that transform covariantly on all of N_n^+.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple, Union

from .core import (
    InvalidIndexError,
    JacobiCoords,
    SquareMatrix,
    corner_minor,
    matrix_to_jacobi,
    pairs,
)
from .identities import S3_ELEMENTS, S3Word, s3_coords
from .involutions import bar, d_matrix, jacobi_dprime, jacobi_prime

logger = logging.getLogger(__name__)

CoordsOrMatrix = Union[JacobiCoords, SquareMatrix]

MRHO_LEFT = S3Word((1, 2, 1))
MRHO_RIGHT = S3Word((2, 1, 2))


def _coords(value: CoordsOrMatrix) -> JacobiCoords:
    return value if isinstance(value, JacobiCoords) else matrix_to_jacobi(value)


@dataclass(frozen=True)
class QVector:
    """Q_1, ..., Q_k for k < n/2; M lies in Ñ_n^+ iff all are 1."""

    n: int
    values: Tuple[Fraction, ...]

    def __getitem__(self, i: int) -> Fraction:
        if not 1 <= i <= len(self.values):
            raise InvalidIndexError(f"no constraint Q_{i} for n={self.n}")
        return self.values[i - 1]

    def as_dict(self) -> Dict[int, Fraction]:
        return {i: v for i, v in enumerate(self.values, start=1)}

    @property
    def is_tilde(self) -> bool:
        return all(v == 1 for v in self.values)


def constraint_indices(n: int) -> range:
    """1 <= i < n/2."""
    return range(1, (n + 1) // 2)


def q_value(coords: JacobiCoords, i: int) -> Fraction:
    """Ratio of the two sides of the i-th defining relation of Ñ_n^+."""
    n = coords.n
    if not 1 <= i <= n:
        raise InvalidIndexError(f"constraint index {i} outside [1, {n}]")
    left = Fraction(1)
    for k in range(i + 1, n + 1):
        left *= coords[(i, k)] / coords[(n + 1 - k, n + 1 - i)]
    right = Fraction(1)
    for k in range(1, i):
        right *= coords[(k, i)] / coords[(n + 1 - i, n + 1 - k)]
    return left / right


def q_values(M: CoordsOrMatrix) -> QVector:
    coords = _coords(M)
    return QVector(coords.n, tuple(q_value(coords, i) for i in constraint_indices(coords.n)))


def q_values_corner(M: SquareMatrix) -> QVector:
    """Q_i from corner minors: Δ_[1,i] Δ_[1,n+1-i] / (Δ_[1,i-1] Δ_[1,n-i])."""
    n = M.n

    def corner(b: int) -> Fraction:
        return corner_minor(M, 1, b) if b >= 1 else Fraction(1)

    return QVector(
        n, tuple(corner(i) * corner(n + 1 - i) / (corner(i - 1) * corner(n - i)) for i in constraint_indices(n))
    )


def q_values_upper(M: CoordsOrMatrix) -> Dict[int, Fraction]:
    """The relations for n/2 <= i < n. Redundant: all are 1 exactly when q_values are."""
    coords = _coords(M)
    n = coords.n
    return {i: q_value(coords, i) for i in range((n + 1) // 2, n)}


def project_to_tilde(coords: JacobiCoords) -> JacobiCoords:
    """
    Rescale x_{i,i+1} so that Q_i = 1, for i < n/2 in increasing order.

    Q_i is linear in x_{i,i+1}, and later steps never touch a coordinate
    that an earlier constraint uses, so one sweep suffices.
    """
    for i in constraint_indices(coords.n):
        q = q_value(coords, i)
        if q != 1:
            coords = coords.replace({(i, i + 1): coords[(i, i + 1)] / q})
    return coords


def q_inversion_holds(M: CoordsOrMatrix) -> bool:
    """Q_i(M') = Q_i(M'') = 1/Q_i(M)."""
    coords = _coords(M)
    q = q_values(coords).values
    inverted = tuple(1 / v for v in q)
    return q_values(jacobi_prime(coords)).values == inverted == q_values(jacobi_dprime(coords)).values


def verify_mrho(M: CoordsOrMatrix) -> bool:
    """((M')'')' = ((M'')')''."""
    coords = _coords(M)
    return s3_coords(coords, MRHO_LEFT) == s3_coords(coords, MRHO_RIGHT)


def mrho_d_criterion(M: CoordsOrMatrix) -> bool:
    """(D_M)_ii (D_M)_{n+1-i,n+1-i} = (-1)^(n+1) for every i."""
    coords = _coords(M)
    n = coords.n
    d = d_matrix(coords).diagonal_entries()
    sign = (-1) ** (n + 1)
    return all(d[i] * d[n - 1 - i] == sign for i in range(n))


def dp_square_is_scalar(M: CoordsOrMatrix) -> bool:
    """(D_M P)² = D_M (P D_M P) is a multiple of the identity."""
    coords = _coords(M)
    n = coords.n
    d = d_matrix(coords).diagonal_entries()
    return len({d[i] * d[n - 1 - i] for i in range(n)}) == 1


# ----------------------------
# y-ratios
# ----------------------------
def _check_ratio_indices(i: int, j: int, n: int) -> None:
    if not 1 <= i < j <= n - 1:
        raise InvalidIndexError(f"y-ratio needs 1 <= i < j <= {n - 1}, got ({i},{j})")


def y_ratio(M: CoordsOrMatrix, i: int, j: int) -> Fraction:
    """y_ij = x_ij / x_{i+1,j+1}."""
    coords = _coords(M)
    _check_ratio_indices(i, j, coords.n)
    return coords[(i, j)] / coords[(i + 1, j + 1)]


def y_ratio_bar(M: CoordsOrMatrix, i: int, j: int) -> Fraction:
    """y_ij of the barred matrix."""
    return y_ratio(bar(_coords(M)), i, j)


def ratio_pairs(n: int) -> List[Tuple[int, int]]:
    return [(i, j) for i, j in pairs(n) if j <= n - 1]


def y_ratio_law_failures(M: CoordsOrMatrix) -> List[str]:
    """Transformation laws of y and ȳ under ′, ″ and the two triple compositions."""
    coords = _coords(M)
    n = coords.n
    m_prime = jacobi_prime(coords)
    m_dprime = jacobi_dprime(coords)
    left = s3_coords(coords, MRHO_LEFT)
    right = s3_coords(coords, MRHO_RIGHT)
    failures = []
    for i, j in ratio_pairs(n):
        if y_ratio_bar(coords, i, j) != 1 / y_ratio(coords, i, j):
            failures.append(f"ȳ_{i}{j} = 1/y_{i}{j}")
        if y_ratio(m_prime, i, j) != y_ratio_bar(coords, i, n + i - j):
            failures.append(f"y_{i}{j}(M') = ȳ_{i},{n + i - j}(M)")
        if y_ratio(m_dprime, i, j) != y_ratio_bar(coords, j - i, j):
            failures.append(f"y_{i}{j}(M'') = ȳ_{j - i},{j}(M)")
        if y_ratio(left, i, j) != y_ratio(right, i, j):
            failures.append(f"y_{i}{j} agrees on both triple compositions")
        if y_ratio_bar(left, i, j) != y_ratio_bar(right, i, j):
            failures.append(f"ȳ_{i}{j} agrees on both triple compositions")
    for failure in failures:
        logger.warning(f"y-ratio law failed: {failure}")
    return failures


# ----------------------------
# S₃ action on Ñ_n^+
# ----------------------------
def s3_action_failures(M: CoordsOrMatrix) -> List[str]:
    """Composition table of S₃ checked pointwise, plus stability of Ñ_n^+ under ′ and ″."""
    coords = _coords(M)
    failures = []
    if not q_values(coords).is_tilde:
        failures.append("point is not in Ñ_n^+")
    for image, label in ((jacobi_prime(coords), "M'"), (jacobi_dprime(coords), "M''")):
        if not q_values(image).is_tilde:
            failures.append(f"{label} leaves Ñ_n^+")
    images = {word: s3_coords(coords, word) for word in S3_ELEMENTS}
    for u in S3_ELEMENTS:
        for v in S3_ELEMENTS:
            if s3_coords(images[v], u) != images[u * v]:
                failures.append(f"{u} after {v} differs from {u * v}")
    return failures


def verify_s3_action(M: CoordsOrMatrix) -> bool:
    failures = s3_action_failures(M)
    for failure in failures:
        logger.warning(f"S3 action check failed: {failure}")
    return not failures
