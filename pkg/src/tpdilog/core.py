"""
Exact rational linear algebra for totally positive upper triangular matrices.

Covers the Jacobi factorization and its inverse, general and flag minors,
and the total positivity test. Indices are 1-based throughout.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import lcm
from typing import Callable, Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)

Rational = Fraction
IndexSet = Tuple[int, ...]
Pair = Tuple[int, int]
Triple = Tuple[int, int, int]

# Above this size the flag-minor criterion replaces the brute-force scan.
BRUTE_FORCE_LIMIT = 6


class TPDilogError(Exception):
    """Base class for all library errors."""


class InvalidIndexError(TPDilogError, ValueError):
    """Bad index set, triple, pair or matrix shape."""


class NotUpperTriangularError(InvalidIndexError):
    """Input matrix has a nonzero entry below the diagonal."""


class InvalidCoordinatesError(TPDilogError, ValueError):
    """Jacobi coordinates that are missing or not positive."""


class SingularMatrixError(TPDilogError, ZeroDivisionError):
    """Matrix has no inverse."""


class NotTotallyPositiveError(TPDilogError, ValueError):
    """Input lies outside the totally positive stratum."""

    def __init__(self, message: str, minor: Optional[str] = None):
        super().__init__(message)
        self.minor = minor


# ----------------------------
# Index sets
# ----------------------------
def interval(a: int, b: int) -> IndexSet:
    """The integer interval [a, b]; empty when a > b."""
    return tuple(range(a, b + 1))


def union(*parts: Iterable[int]) -> IndexSet:
    merged = set()
    for part in parts:
        merged.update(part)
    return tuple(sorted(merged))


def bar_set(indices: Iterable[int], n: int) -> IndexSet:
    """Mirror image {n+1-i} of an index set."""
    return tuple(sorted(n + 1 - i for i in indices))


def validate_index_set(indices: Iterable[int], n: int) -> IndexSet:
    result = tuple(indices)
    for position, value in enumerate(result):
        if not 1 <= value <= n:
            raise InvalidIndexError(f"index {value} outside [1, {n}]")
        if position and result[position - 1] >= value:
            raise InvalidIndexError(f"index set {result} is not strictly increasing")
    return result


def format_index_set(indices: Sequence[int]) -> str:
    return "{" + ",".join(str(i) for i in indices) + "}" if indices else "∅"


def format_minor(rows: Sequence[int], cols: Sequence[int]) -> str:
    return f"Δ_{format_index_set(rows)}^{format_index_set(cols)}"


def all_index_sets(n: int) -> Iterator[IndexSet]:
    """Every nonempty subset of [1, n], by size then lexicographically."""
    for size in range(1, n + 1):
        yield from combinations(range(1, n + 1), size)


@lru_cache(maxsize=None)
def pairs(n: int) -> Tuple[Pair, ...]:
    """Coordinate labels (i, j), 1 <= i < j <= n, in lexicographic order."""
    return tuple((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1))


@lru_cache(maxsize=None)
def _pair_positions(n: int) -> Dict[Pair, int]:
    return {pair: position for position, pair in enumerate(pairs(n))}


@lru_cache(maxsize=None)
def triples(n: int) -> Tuple[Triple, ...]:
    """The discrete tetrahedron T_n in lexicographic order."""
    return tuple(combinations(range(1, n + 1), 3))


def validate_triple(t: Sequence[int], n: int) -> Triple:
    if len(t) != 3:
        raise InvalidIndexError(f"triple {tuple(t)} must have three entries")
    a, b, c = t
    if not 1 <= a < b < c <= n:
        raise InvalidIndexError(f"triple ({a},{b},{c}) violates 1 <= a < b < c <= {n}")
    return (a, b, c)


# ----------------------------
# Jacobi coordinates
# ----------------------------
@dataclass(frozen=True)
class JacobiCoords:
    """Positive coordinates x_ij, stored in the order of pairs(n)."""

    n: int
    values: Tuple[Fraction, ...]

    def __post_init__(self):
        if self.n < 2:
            raise InvalidCoordinatesError(f"dimension must be at least 2, got {self.n}")
        values = tuple(Fraction(v) for v in self.values)
        if len(values) != len(pairs(self.n)):
            raise InvalidCoordinatesError(
                f"expected {len(pairs(self.n))} coordinates for n={self.n}, got {len(values)}"
            )
        for (i, j), value in zip(pairs(self.n), values):
            if value <= 0:
                raise InvalidCoordinatesError(f"x_{i},{j} = {value} is not positive")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_mapping(cls, n: int, mapping: Mapping[Pair, object]) -> "JacobiCoords":
        missing = [pair for pair in pairs(n) if pair not in mapping]
        if missing:
            raise InvalidCoordinatesError(f"missing coordinates {missing}")
        extra = set(mapping) - set(pairs(n))
        if extra:
            raise InvalidCoordinatesError(f"unexpected coordinates {sorted(extra)}")
        return cls(n, tuple(Fraction(mapping[pair]) for pair in pairs(n)))

    @classmethod
    def constant(cls, n: int, value: object = 1) -> "JacobiCoords":
        return cls(n, (Fraction(value),) * len(pairs(n)))

    def __getitem__(self, pair: Pair) -> Fraction:
        try:
            return self.values[_pair_positions(self.n)[tuple(pair)]]
        except KeyError:
            raise InvalidIndexError(f"no coordinate x_{pair} for n={self.n}") from None

    @property
    def x(self) -> Dict[Pair, Fraction]:
        return dict(zip(pairs(self.n), self.values))

    def items(self) -> Iterator[Tuple[Pair, Fraction]]:
        return iter(zip(pairs(self.n), self.values))

    def replace(self, updates: Mapping[Pair, object]) -> "JacobiCoords":
        """Copy with the given coordinates overwritten."""
        positions = _pair_positions(self.n)
        values = list(self.values)
        for pair, value in updates.items():
            if pair not in positions:
                raise InvalidIndexError(f"no coordinate x_{pair} for n={self.n}")
            values[positions[pair]] = Fraction(value)
        return JacobiCoords(self.n, tuple(values))


def reverse_coords(coords: JacobiCoords) -> JacobiCoords:
    """x_ij -> x_{n+1-j, n+1-i}: the coordinates of S M^-1 S."""
    n = coords.n
    return JacobiCoords.from_mapping(n, {(i, j): coords[(n + 1 - j, n + 1 - i)] for i, j in pairs(n)})


# ----------------------------
# Matrices
# ----------------------------
@dataclass(frozen=True, eq=False)
class SquareMatrix:
    """Dense n x n matrix of Fractions, row-major."""

    rows: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(v) for v in row) for row in self.rows)
        if not rows or any(len(row) != len(rows) for row in rows):
            raise InvalidIndexError("matrix must be square and non-empty")
        object.__setattr__(self, "rows", rows)

    def __eq__(self, other):
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(v) for v in row) + "]" for row in self.rows)
        return f"{type(self).__name__}([{body}])"

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, key: Pair) -> Fraction:
        i, j = key
        return self.rows[i - 1][j - 1]

    @classmethod
    def from_function(cls, n: int, entry: Callable[[int, int], object]):
        return cls(tuple(tuple(entry(i, j) for j in range(1, n + 1)) for i in range(1, n + 1)))

    @classmethod
    def identity(cls, n: int):
        return cls.from_function(n, lambda i, j: int(i == j))

    def __matmul__(self, other: "SquareMatrix") -> "SquareMatrix":
        if self.n != other.n:
            raise InvalidIndexError(f"cannot multiply {self.n}x{self.n} by {other.n}x{other.n}")
        columns = list(zip(*other.rows))
        return SquareMatrix(
            tuple(tuple(sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in columns) for row in self.rows)
        )

    def transpose(self) -> "SquareMatrix":
        return SquareMatrix(tuple(zip(*self.rows)))

    def map(self, fn: Callable[[Fraction], object]) -> "SquareMatrix":
        return SquareMatrix(tuple(tuple(fn(v) for v in row) for row in self.rows))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "SquareMatrix":
        return SquareMatrix(tuple(tuple(self.rows[i - 1][j - 1] for j in cols) for i in rows))

    def diagonal_entries(self) -> Tuple[Fraction, ...]:
        return tuple(self.rows[i][i] for i in range(self.n))

    def is_upper_triangular(self) -> bool:
        return all(self.rows[i][j] == 0 for i in range(self.n) for j in range(i))

    def is_unitriangular(self) -> bool:
        return self.is_upper_triangular() and all(v == 1 for v in self.diagonal_entries())

    def is_diagonal(self) -> bool:
        return all(self.rows[i][j] == 0 for i in range(self.n) for j in range(self.n) if i != j)


@dataclass(frozen=True, eq=False)
class UpperUnitriangular(SquareMatrix):
    """Element of the unipotent group N_n."""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_upper_triangular():
            raise NotUpperTriangularError("matrix has nonzero entries below the diagonal")
        if not all(v == 1 for v in self.diagonal_entries()):
            raise InvalidIndexError("unitriangular matrix must have ones on the diagonal")


@dataclass(frozen=True, eq=False)
class DiagonalMatrix(SquareMatrix):
    """Invertible diagonal matrix."""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_diagonal():
            raise InvalidIndexError("matrix has nonzero off-diagonal entries")
        if any(v == 0 for v in self.diagonal_entries()):
            raise InvalidIndexError("diagonal matrix must have nonzero diagonal")

    @classmethod
    def from_entries(cls, values: Iterable[object]) -> "DiagonalMatrix":
        values = tuple(values)
        return cls.from_function(len(values), lambda i, j: values[i - 1] if i == j else 0)

    def inverse(self) -> "DiagonalMatrix":
        return DiagonalMatrix.from_entries(1 / v for v in self.diagonal_entries())


def as_unitriangular(M: SquareMatrix) -> UpperUnitriangular:
    return M if isinstance(M, UpperUnitriangular) else UpperUnitriangular(M.rows)


def permutation_w0(n: int) -> SquareMatrix:
    """Anti-diagonal permutation matrix of the longest element."""
    if n < 2:
        raise InvalidIndexError(f"n must be at least 2, got {n}")
    return SquareMatrix.from_function(n, lambda i, j: int(i + j == n + 1))


def sign_matrix(n: int) -> DiagonalMatrix:
    """S = diag(1, -1, 1, ...)."""
    if n < 2:
        raise InvalidIndexError(f"n must be at least 2, got {n}")
    return DiagonalMatrix.from_entries((-1) ** (i - 1) for i in range(1, n + 1))


def w0_conjugate(A: SquareMatrix) -> SquareMatrix:
    """P A P, computed by reversing rows and columns."""
    n = A.n
    result = SquareMatrix.from_function(n, lambda i, j: A[(n + 1 - i, n + 1 - j)])
    if isinstance(A, DiagonalMatrix):
        return DiagonalMatrix(result.rows)
    return result


# ----------------------------
# Determinants and minors
# ----------------------------
def _bareiss(int_rows: Sequence[Sequence[int]]) -> int:
    """Fraction-free elimination on an integer matrix, with row swaps."""
    a = [list(row) for row in int_rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    previous = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            row_i, row_k = a[i], a[k]
            factor = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - factor * row_k[j]) // previous
        previous = pivot
    return sign * a[n - 1][n - 1]


def _determinant_of_rows(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    # clear denominators row by row, then divide the integer determinant back
    scale = 1
    int_rows = []
    for row in rows:
        multiplier = lcm(*(v.denominator for v in row)) if row else 1
        scale *= multiplier
        int_rows.append([v.numerator * (multiplier // v.denominator) for v in row])
    return Fraction(_bareiss(int_rows), scale)


def determinant_exact(A: SquareMatrix) -> Fraction:
    """Exact determinant by Bareiss elimination."""
    return _determinant_of_rows(A.rows)


def determinant_cofactor(A: SquareMatrix) -> Fraction:
    """Laplace expansion along the first row; independent oracle for small matrices."""
    rows = A.rows

    @lru_cache(maxsize=None)
    def expand(depth: int, columns: Tuple[int, ...]) -> Fraction:
        if not columns:
            return Fraction(1)
        total = Fraction(0)
        for position, col in enumerate(columns):
            entry = rows[depth][col]
            if entry:
                rest = columns[:position] + columns[position + 1:]
                total += (-1) ** position * entry * expand(depth + 1, rest)
        return total

    return expand(0, tuple(range(A.n)))


def inverse(A: SquareMatrix) -> SquareMatrix:
    """Exact inverse by Gauss-Jordan elimination with row pivoting."""
    n = A.n
    work = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A.rows)]
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot_row is None:
            raise SingularMatrixError("matrix is singular")
        work[col], work[pivot_row] = work[pivot_row], work[col]
        pivot = work[col][col]
        work[col] = [v / pivot for v in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [v - factor * p for v, p in zip(work[r], work[col])]
    return SquareMatrix(tuple(tuple(row[n:]) for row in work))


def minor(M: SquareMatrix, rows: Iterable[int], cols: Iterable[int]) -> Fraction:
    """Δ_rows^cols(M); the empty minor is 1."""
    rows = validate_index_set(rows, M.n)
    cols = validate_index_set(cols, M.n)
    if len(rows) != len(cols):
        raise InvalidIndexError(f"minor needs equal cardinalities, got rows {rows} and cols {cols}")
    if not rows:
        return Fraction(1)
    return _determinant_of_rows([[M.rows[i - 1][j - 1] for j in cols] for i in rows])


def flag_minor_right(M: SquareMatrix, I: Iterable[int]) -> Fraction:
    """Δ_I: rows I against the last |I| columns."""
    I = tuple(I)
    return minor(M, I, interval(M.n + 1 - len(I), M.n))


def flag_minor_upper(M: SquareMatrix, J: Iterable[int]) -> Fraction:
    """Δ^J: the first |J| rows against columns J."""
    J = tuple(J)
    return minor(M, interval(1, len(J)), J)


def corner_minor(M: SquareMatrix, a: int, b: int) -> Fraction:
    return flag_minor_right(M, interval(a, b))


def corner_minor_product(coords: JacobiCoords, a: int, b: int) -> Fraction:
    """Closed form of Δ_[a,b] as a product of Jacobi coordinates."""
    n = coords.n
    value = Fraction(1)
    for i in range(1, b - a + 2):
        for j in range(b + 1, n + 1):
            value *= coords[(i, j)]
    return value


# ----------------------------
# Jacobi factorization
# ----------------------------
def jacobi_to_matrix(coords: JacobiCoords) -> UpperUnitriangular:
    """Multiply out J_1(x_12) · J_2(x_13) J_1(x_23) · ... in factorization order."""
    n = coords.n
    entries = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(1, n):
        for r in range(k):
            # right multiplication by J_m(x) adds x times column m to column m+1
            m = k - r
            x = coords[(r + 1, k + 1)]
            for row in entries:
                row[m] += x * row[m - 1]
    return UpperUnitriangular(tuple(tuple(row) for row in entries))


def matrix_to_jacobi(M: SquareMatrix) -> JacobiCoords:
    """Recover x_ij as a ratio of four corner minors."""
    M = as_unitriangular(M)
    n = M.n
    corners: Dict[Pair, Fraction] = {}

    def corner(a: int, b: int) -> Fraction:
        if a > b:
            return Fraction(1)
        if (a, b) not in corners:
            value = corner_minor(M, a, b)
            if value == 0:
                label = f"Δ_[{a},{b}]"
                raise NotTotallyPositiveError(
                    f"corner minor {label} vanishes: matrix is not in the totally positive stratum", minor=label
                )
            corners[(a, b)] = value
        return corners[(a, b)]

    values = []
    for i, j in pairs(n):
        x = corner(j - i, j - 1) * corner(j - i + 2, j) / (corner(j - i + 1, j - 1) * corner(j - i + 1, j))
        if x <= 0:
            raise NotTotallyPositiveError(f"recovered coordinate x_{i},{j} = {x} is not positive")
        values.append(x)
    return JacobiCoords(n, tuple(values))


def sign_conjugate_inverse(M: SquareMatrix) -> UpperUnitriangular:
    """S M^-1 S, which stays in N_n^+ with mirrored coordinates."""
    S = sign_matrix(M.n)
    return as_unitriangular(S @ inverse(M) @ S)


# ----------------------------
# Total positivity
# ----------------------------
def _first_primes(count: int) -> Tuple[int, ...]:
    found = []
    candidate = 2
    while len(found) < count:
        if all(candidate % p for p in found if p * p <= candidate):
            found.append(candidate)
        candidate += 1
    return tuple(found)


@lru_cache(maxsize=None)
def _generic_support(n: int) -> Tuple[Tuple[IndexSet, IndexSet], ...]:
    """Minors that do not vanish on the distinct-prime witness, smallest first."""
    witness = jacobi_to_matrix(JacobiCoords(n, tuple(Fraction(p) for p in _first_primes(len(pairs(n))))))
    support = []
    for size in range(1, n + 1):
        for rows in combinations(range(1, n + 1), size):
            for cols in combinations(range(1, n + 1), size):
                if minor(witness, rows, cols) != 0:
                    support.append((rows, cols))
    logger.debug(f"Generic minor support for n={n}: {len(support)} minors")
    return tuple(support)


def find_nonpositive_minor(M: SquareMatrix) -> Optional[Tuple[IndexSet, IndexSet]]:
    """First minor violating total positivity, or None."""
    if not M.is_upper_triangular():
        raise NotUpperTriangularError("total positivity is only tested on upper triangular matrices")
    n = M.n
    for i in range(1, n + 1):
        if M[(i, i)] <= 0:
            return (i,), (i,)
    if n <= BRUTE_FORCE_LIMIT:
        for rows, cols in _generic_support(n):
            if minor(M, rows, cols) <= 0:
                return rows, cols
        return None
    for I in all_index_sets(n):
        last = interval(n + 1 - len(I), n)
        if minor(M, I, last) <= 0:
            return I, last
        first = interval(1, len(I))
        if minor(M, first, I) <= 0:
            return first, I
    return None


def is_totally_positive(M: SquareMatrix) -> bool:
    return find_nonpositive_minor(M) is None


def require_totally_positive(M: SquareMatrix) -> None:
    failing = find_nonpositive_minor(M)
    if failing is not None:
        rows, cols = failing
        label = format_minor(rows, cols)
        raise NotTotallyPositiveError(
            f"minor {label} = {minor(M, rows, cols)} is not positive", minor=label
        )
