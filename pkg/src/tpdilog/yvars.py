"""
Y-variables: cross-ratios of flag minors labeled by the triples of T_n.

Four families are built, two from right flag minors (Y_abc, Ỹ_abc) and two
from upper flag minors (Y^abc, Ỹ^abc). Also here are the relations among
them, the all-equal-coordinate matrices M_x, and the Toeplitz determinants
that evaluate their minors.
"""

import logging
from enum import Enum
from fractions import Fraction
from math import comb, factorial
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .core import (
    IndexSet,
    InvalidIndexError,
    JacobiCoords,
    SquareMatrix,
    Triple,
    determinant_exact,
    flag_minor_right,
    flag_minor_upper,
    interval,
    jacobi_to_matrix,
    minor,
    triples,
    union,
    validate_triple,
)
from .involutions import dprime, prime

logger = logging.getLogger(__name__)


class YFamily(str, Enum):
    Y_LOWER = "Y_lower"
    Y_LOWER_TILDE = "Y_lower_tilde"
    Y_UPPER = "Y_upper"
    Y_UPPER_TILDE = "Y_upper_tilde"

    @property
    def uses_upper_minors(self) -> bool:
        return self in (YFamily.Y_UPPER, YFamily.Y_UPPER_TILDE)

    @property
    def symbol(self) -> str:
        return {
            YFamily.Y_LOWER: "Y_abc",
            YFamily.Y_LOWER_TILDE: "Ỹ_abc",
            YFamily.Y_UPPER: "Y^abc",
            YFamily.Y_UPPER_TILDE: "Ỹ^abc",
        }[self]


RatioSets = Tuple[Tuple[IndexSet, IndexSet], Tuple[IndexSet, IndexSet]]


def y_index_sets(family: YFamily, t: Sequence[int], n: int) -> RatioSets:
    """((numerator sets), (denominator sets)) of the flag minors defining Y."""
    a, b, c = validate_triple(t, n)
    family = YFamily(family)
    if family is YFamily.Y_LOWER:
        num = (union(interval(a, b - 1), interval(c + 1, n)), union(interval(a + 1, b), interval(c, n)))
        den = (union(interval(a, b), interval(c + 1, n)), union(interval(a + 1, b - 1), interval(c, n)))
    elif family is YFamily.Y_LOWER_TILDE:
        num = (union(interval(1, a), interval(b + 1, c - 1)), union(interval(1, a - 1), interval(b, c)))
        den = (union(interval(1, a), interval(b, c - 1)), union(interval(1, a - 1), interval(b + 1, c)))
    elif family is YFamily.Y_UPPER:
        num = (union(interval(a, b), interval(c + 1, n)), union(interval(a + 1, b - 1), interval(c, n)))
        den = (union(interval(a, b - 1), interval(c + 1, n)), union(interval(a + 1, b), interval(c, n)))
    else:
        num = (union(interval(1, a), interval(b, c - 1)), union(interval(1, a - 1), interval(b + 1, c)))
        den = (union(interval(1, a), interval(b + 1, c - 1)), union(interval(1, a - 1), interval(b, c)))
    return num, den


class FlagMinorTable:
    """Memo of the flag minors of one matrix; Y-families share most of them."""

    def __init__(self, M: SquareMatrix):
        self.M = M
        self._right: Dict[IndexSet, Fraction] = {}
        self._upper: Dict[IndexSet, Fraction] = {}

    def right(self, I: IndexSet) -> Fraction:
        if I not in self._right:
            self._right[I] = flag_minor_right(self.M, I)
        return self._right[I]

    def upper(self, J: IndexSet) -> Fraction:
        if J not in self._upper:
            self._upper[J] = flag_minor_upper(self.M, J)
        return self._upper[J]

    def ratio(self, sets: RatioSets, upper: bool) -> Fraction:
        flag = self.upper if upper else self.right
        (p, q), (r, s) = sets
        return flag(p) * flag(q) / (flag(r) * flag(s))


def y_value(M: SquareMatrix, family: YFamily, t: Sequence[int], table: Optional[FlagMinorTable] = None) -> Fraction:
    family = YFamily(family)
    table = table or FlagMinorTable(M)
    return table.ratio(y_index_sets(family, t, M.n), family.uses_upper_minors)


def y_values(M: SquareMatrix, family: YFamily) -> Dict[Triple, Fraction]:
    """All Y-variables of one family, keyed by triple in lexicographic order."""
    table = FlagMinorTable(M)
    return {t: y_value(M, family, t, table) for t in triples(M.n)}


def mirror_triple(t: Triple, n: int) -> Triple:
    a, b, c = t
    return (n + 1 - c, n + 1 - b, n + 1 - a)


def y_lower_general_minor_form(M: SquareMatrix, t: Sequence[int]) -> Fraction:
    """Y_abc as a ratio of four general (non-flag) minors."""
    a, b, c = validate_triple(t, M.n)
    s = a + c - b
    return (
        minor(M, interval(a, b - 1), interval(s + 1, c))
        * minor(M, interval(a + 1, b), interval(s, c - 1))
        / (minor(M, interval(a, b), interval(s, c)) * minor(M, interval(a + 1, b - 1), interval(s + 1, c - 1)))
    )


def y_relation_failures(M: SquareMatrix) -> List[str]:
    """Labels of the relations among Y-families that fail on M, empty when all hold."""
    n = M.n
    m_prime = prime(M)
    m_dprime = dprime(M)
    y = y_values(M, YFamily.Y_LOWER)
    y_up = y_values(M, YFamily.Y_UPPER)
    y_up_tilde = y_values(M, YFamily.Y_UPPER_TILDE)
    y_low_tilde = y_values(M, YFamily.Y_LOWER_TILDE)
    y_prime = y_values(m_prime, YFamily.Y_LOWER)
    y_low_tilde_prime = y_values(m_prime, YFamily.Y_LOWER_TILDE)
    y_up_dprime = y_values(m_dprime, YFamily.Y_UPPER)
    y_up_tilde_dprime = y_values(m_dprime, YFamily.Y_UPPER_TILDE)

    failures = []
    for t in triples(n):
        a, b, c = t
        label = f"({a},{b},{c})"
        mirrored = mirror_triple(t, n)
        if y[t] != y_up_tilde[(a, a + c - b, c)]:
            failures.append(f"Y_abc = Ỹ^(a,a+c-b,c) at {label}")
        if y[t] != y_lower_general_minor_form(M, t):
            failures.append(f"Y_abc general-minor form at {label}")
        if y_low_tilde_prime[t] != 1 / y[mirrored]:
            failures.append(f"Ỹ_abc(M') = 1/Y_mirror(M) at {label}")
        if y_low_tilde[t] != 1 / y_prime[mirrored]:
            failures.append(f"Ỹ_abc(M) = 1/Y_mirror(M') at {label}")
        if y_up_tilde_dprime[t] != 1 / y_up[mirrored]:
            failures.append(f"Ỹ^abc(M'') = 1/Y^mirror(M) at {label}")
        if y_up_tilde[t] != 1 / y_up_dprime[mirrored]:
            failures.append(f"Ỹ^abc(M) = 1/Y^mirror(M'') at {label}")
    for failure in failures:
        logger.warning(f"Y-relation failed: {failure}")
    return failures


def y_relations_check(M: SquareMatrix) -> bool:
    return not y_relation_failures(M)


def plucker_sides(M: SquareMatrix, I: Iterable[int], t: Sequence[int], upper: bool = False) -> Tuple[Fraction, Fraction]:
    """
    Both sides of the three-term Plücker relation
    Δ_{I∪ac} Δ_{I∪b} = Δ_{I∪ab} Δ_{I∪c} + Δ_{I∪bc} Δ_{I∪a} for I disjoint from {a,b,c}.
    """
    a, b, c = validate_triple(t, M.n)
    I = tuple(I)
    if set(I) & {a, b, c}:
        raise InvalidIndexError(f"index set {I} meets the triple ({a},{b},{c})")
    flag = flag_minor_upper if upper else flag_minor_right
    lhs = flag(M, union(I, (a, c))) * flag(M, union(I, (b,)))
    rhs = flag(M, union(I, (a, b))) * flag(M, union(I, (c,))) + flag(M, union(I, (b, c))) * flag(M, union(I, (a,)))
    return lhs, rhs


# ----------------------------
# M_x and Toeplitz determinants
# ----------------------------
def m_x(n: int, x: object) -> SquareMatrix:
    """All Jacobi coordinates equal to x; entries C(n-i, j-i) x^(j-i)."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError(f"M_x needs x > 0, got {x}")
    return jacobi_to_matrix(JacobiCoords.constant(n, x))


def m_x_entry(n: int, x: object, i: int, j: int) -> Fraction:
    if j < i:
        return Fraction(0)
    return comb(n - i, j - i) * Fraction(x) ** (j - i)


def _inverse_factorial(p: int) -> Fraction:
    return Fraction(0) if p < 0 else Fraction(1, factorial(p))


def toeplitz_matrix(k: int, m: int) -> SquareMatrix:
    """(m+1)x(m+1) matrix with entries 1/(k+j-i)!, and 1/p! = 0 for p < 0."""
    if k < 0 or m < 0:
        raise ValueError(f"Toeplitz matrix needs k, m >= 0, got k={k}, m={m}")
    return SquareMatrix.from_function(m + 1, lambda i, j: _inverse_factorial(k + j - i))


def toeplitz_det(k: int, m: int) -> Fraction:
    """
    F_{k,m} = (1! 2! ... m!) / (k! (k+1)! ... (k+m)!).

    m = -1 is the empty determinant, 1, which the Desnanot recurrence needs at m = 1.
    """
    if k < 0 or m < -1:
        raise ValueError(f"toeplitz_det needs k >= 0, m >= -1, got k={k}, m={m}")
    numerator = 1
    for p in range(1, m + 1):
        numerator *= factorial(p)
    denominator = 1
    for p in range(k, k + m + 1):
        denominator *= factorial(p)
    return Fraction(numerator, denominator)


def desnanot_sides(A: SquareMatrix) -> Tuple[Fraction, Fraction]:
    """det A det A0 + det A12 det A21 and det A11 det A22 for the corner submatrices."""
    size = A.n
    if size < 2:
        raise InvalidIndexError("Desnanot identity needs at least a 2x2 matrix")
    head, tail = interval(1, size - 1), interval(2, size)
    centre = interval(2, size - 1)
    lhs = determinant_exact(A) * minor(A, centre, centre) + minor(A, head, tail) * minor(A, tail, head)
    rhs = minor(A, head, head) * minor(A, tail, tail)
    return lhs, rhs


def mx_minor_exponent(a: int, b: int, c: int) -> int:
    return (c - b - 1) * (b + 1 - a)


def _check_mx_minor_args(n: int, a: int, b: int, c: int) -> None:
    if not (1 <= a <= b < c <= n + 1):
        raise InvalidIndexError(f"need 1 <= a <= b < c <= n+1, got a={a}, b={b}, c={c}, n={n}")


def scaled_mx_minor(n: int, a: int, b: int, c: int, x: object) -> Fraction:
    """Δ_{[a,b]∪[c,n]}(M_x) divided by x^((c-b-1)(b+1-a))."""
    _check_mx_minor_args(n, a, b, c)
    value = flag_minor_right(m_x(n, x), union(interval(a, b), interval(c, n)))
    return value / Fraction(x) ** mx_minor_exponent(a, b, c)


def scaled_mx_minor_formula(n: int, a: int, b: int, c: int) -> Fraction:
    """Factorial closed form of scaled_mx_minor, independent of x."""
    _check_mx_minor_args(n, a, b, c)
    value = Fraction(1)
    for i in range(a, b + 1):
        value *= factorial(n - i)
    for j in range(a + c - b - 1, c):
        value /= factorial(n - j)
    return value * toeplitz_det(c - b - 1, b - a)


def mx_y_value(family: YFamily, t: Triple) -> Fraction:
    """Y-variables of M_x, the same for every x > 0."""
    a, b, c = t
    if YFamily(family).uses_upper_minors:
        return Fraction(b - a, c - b)
    return Fraction(c - b, b - a)
