"""
Zero-tolerance suites: every check is a rational equality.

`tetra` covers the transformations L and R, `mrho` the subvariety Ñ_n^+ and
the y-ratios, and `exact` everything else about the factorization, the
involutions, the Y-variables and the matrices M_x.
"""

import logging
import random
from typing import List, Optional

from ..core import (
    IndexSet,
    JacobiCoords,
    all_index_sets,
    corner_minor,
    corner_minor_product,
    determinant_exact,
    flag_minor_right,
    is_totally_positive,
    jacobi_to_matrix,
    matrix_to_jacobi,
    permutation_w0,
    reverse_coords,
    sign_conjugate_inverse,
    triples,
    w0_conjugate,
)
from ..identities import IdentityReport, IdentityResult, exact_check, s3_value
from ..involutions import (
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
    triple_dprime_closed_form,
    triple_prime_closed_form,
)
from ..s3action import (
    MRHO_LEFT,
    MRHO_RIGHT,
    dp_square_is_scalar,
    mrho_d_criterion,
    project_to_tilde,
    q_inversion_holds,
    q_values,
    q_values_upper,
    verify_mrho,
    verify_s3_action,
    y_ratio_law_failures,
)
from ..tetra import (
    TransformKind,
    apply_chain,
    l_inverse,
    l_transform,
    lex_composition,
    lex_target,
    r_inverse,
    r_transform,
    tetrahedron_chains,
    verify_tetrahedron,
)
from ..utils.sampling import random_b_matrix, random_coords, random_rational, random_square_matrix
from ..yvars import (
    YFamily,
    desnanot_sides,
    m_x,
    m_x_entry,
    mx_y_value,
    plucker_sides,
    scaled_mx_minor,
    scaled_mx_minor_formula,
    toeplitz_det,
    toeplitz_matrix,
    y_relation_failures,
    y_values,
)
from .base import BaseSuite, Trial

logger = logging.getLogger(__name__)

EXHAUSTIVE_LIMIT = 5
SAMPLED_INDEX_SETS = 50
TOEPLITZ_LIMIT = 8


def sample_index_sets(n: int, rng: random.Random, count: int = SAMPLED_INDEX_SETS) -> List[IndexSet]:
    """Every index set for n <= 5, otherwise `count` random nonempty subsets."""
    if n <= EXHAUSTIVE_LIMIT:
        return list(all_index_sets(n))
    sets = []
    for _ in range(count):
        size = rng.randint(1, n)
        sets.append(tuple(sorted(rng.sample(range(1, n + 1), size))))
    return sets


def binet_cauchy_holds(coords: JacobiCoords, index_sets: Optional[List[IndexSet]] = None) -> bool:
    """ε_I Δ_Ī(M) = Δ^[1,|I|](D_M) Δ_I(M') with ε_I = (-1)^(|I|(|I|-1)/2)."""
    n = coords.n
    M = jacobi_to_matrix(coords)
    m_prime = jacobi_to_matrix(jacobi_prime(coords))
    d = d_matrix(coords).diagonal_entries()
    sets = all_index_sets(n) if index_sets is None else index_sets
    for I in sets:
        k = len(I)
        leading = 1
        for v in d[:k]:
            leading *= v
        mirrored = tuple(sorted(n + 1 - i for i in I))
        if (-1) ** (k * (k - 1) // 2) * flag_minor_right(M, mirrored) != leading * flag_minor_right(m_prime, I):
            logger.debug(f"Binet-Cauchy sign relation fails at I={I}")
            return False
    return True


def corner_signs_hold(coords: JacobiCoords) -> bool:
    """(-1)^(i(i-1)/2) Δ_[1,i](M) = (D_M)_11 ... (D_M)_ii."""
    M = jacobi_to_matrix(coords)
    d = d_matrix(coords).diagonal_entries()
    product = 1
    for i in range(1, coords.n + 1):
        product *= d[i - 1]
        if (-1) ** (i * (i - 1) // 2) * corner_minor(M, 1, i) != product:
            return False
    return True


class ExactSuite(BaseSuite):
    """Factorization, involutions, Y-variable relations and M_x, all exact."""

    name = "exact"

    def run_trial(self, trial: Trial) -> IdentityReport:
        n = trial.n
        rng = trial.rng
        coords = random_coords(n, rng, trial.coord_max)
        M = jacobi_to_matrix(coords)
        results: List[IdentityResult] = []
        results.extend(self._factorization(coords, M))
        results.extend(self._involutions(coords, M, rng))
        results.extend(self._b_group(trial))
        results.extend(self._y_variables(M, rng))
        results.extend(self._mx(n, random_rational(rng, trial.coord_max)))
        results.append(exact_check("Desnanot identity", self._desnanot(random_square_matrix(n, rng, trial.coord_max))))
        if trial.is_first:
            results.append(exact_check("Toeplitz determinant formula", self._toeplitz()))
            results.append(exact_check("BFZ twist is not involutive", find_twist_witness(rng) is not None))
        return trial.report(results)

    def _factorization(self, coords: JacobiCoords, M) -> List[IdentityResult]:
        n = coords.n
        corners = all(
            corner_minor(M, a, b) == corner_minor_product(coords, a, b)
            for a in range(1, n + 1)
            for b in range(a, n + 1)
        )
        return [
            exact_check("jacobi matrix is totally positive", is_totally_positive(M)),
            exact_check("coordinate round trip", matrix_to_jacobi(M) == coords),
            exact_check("corner minor products", corners),
            exact_check("sign-conjugate inverse reverses coordinates", matrix_to_jacobi(sign_conjugate_inverse(M)) == reverse_coords(coords)),
        ]

    def _involutions(self, coords: JacobiCoords, M, rng: random.Random) -> List[IdentityResult]:
        n = coords.n
        gauss = decompose_gauss(M)
        d = d_matrix(coords)
        P = permutation_w0(n)
        m_prime = jacobi_prime(coords)
        m_dprime = jacobi_dprime(coords)
        det_d = determinant_exact(d)
        binet_sets = None if n <= EXHAUSTIVE_LIMIT else sample_index_sets(n, rng)
        return [
            exact_check("prime is an involution", jacobi_prime(m_prime) == coords),
            exact_check("double prime is an involution", jacobi_dprime(m_dprime) == coords),
            exact_check("bar commutes with prime", bar(m_prime) == jacobi_prime(bar(coords))),
            exact_check("prime closed form matches elimination", matrix_to_jacobi(gauss.m_prime) == m_prime),
            exact_check("double prime closed form matches elimination", matrix_to_jacobi(gauss.m_dprime) == m_dprime),
            exact_check("D_M matches elimination", gauss.d == d),
            exact_check("Gauss decomposition", w0_conjugate(M) == gauss.m_prime @ P @ gauss.d @ gauss.m_dprime),
            exact_check("det D_M = ±1", abs(det_d) == 1),
            exact_check("D of the images is D_M inverse", d_matrix(m_prime) == d.inverse() == d_matrix(m_dprime)),
            exact_check("corner minor signs", corner_signs_hold(coords)),
            exact_check("Binet-Cauchy sign relation", binet_cauchy_holds(coords, binet_sets)),
            exact_check("triple prime closed form", s3_value(M, MRHO_LEFT) == triple_prime_closed_form(M)),
            exact_check("triple double prime closed form", s3_value(M, MRHO_RIGHT) == triple_dprime_closed_form(M)),
            exact_check("BFZ twist gives prime", prime(M) == w0_conjugate(bfz_twist(M).transpose())),
            exact_check("BFZ twist gives double prime", dprime(M) == bfz_twist(w0_conjugate(M.transpose()))),
        ]

    def _b_group(self, trial: Trial) -> List[IdentityResult]:
        G = random_b_matrix(trial.n, trial.rng, trial.coord_max)
        sets = sample_index_sets(trial.n, trial.rng)
        g_check = check_g(G)
        g_hat = hat_g(G)
        return [
            exact_check("check-g flag relabeling", not flag_relabel_mismatches(G, g_check, "right", sets)),
            exact_check("hat-g flag relabeling", not flag_relabel_mismatches(G, g_hat, "upper", sets)),
            exact_check("check-g is an involution", check_g(g_check) == G),
            exact_check("hat-g is an involution", hat_g(g_hat) == G),
        ]

    def _y_variables(self, M, rng: random.Random) -> List[IdentityResult]:
        n = M.n
        plucker = True
        for t in triples(n):
            rest = [i for i in range(1, n + 1) if i not in t]
            I = sorted(rng.sample(rest, rng.randint(0, len(rest) - 1))) if rest else []
            for upper in (False, True):
                lhs, rhs = plucker_sides(M, I, t, upper=upper)
                plucker = plucker and lhs == rhs
        return [
            exact_check("Y-family relations", not y_relation_failures(M)),
            exact_check("three-term Plücker relations", plucker),
        ]

    def _mx(self, n: int, x) -> List[IdentityResult]:
        mx = m_x(n, x)
        entries = all(mx[(i, j)] == m_x_entry(n, x, i, j) for i in range(1, n + 1) for j in range(1, n + 1))
        y_ok = all(
            value == mx_y_value(family, t) for family in YFamily for t, value in y_values(mx, family).items()
        )
        minors_ok = all(
            scaled_mx_minor(n, a, b, c, x) == scaled_mx_minor_formula(n, a, b, c)
            for a in range(1, n + 1)
            for b in range(a, n + 1)
            for c in range(b + 1, n + 2)
        )
        return [
            exact_check("M_x entries", entries),
            exact_check("M_x Y-values", y_ok),
            exact_check("M_x scaled minors", minors_ok),
        ]

    @staticmethod
    def _desnanot(A) -> bool:
        lhs, rhs = desnanot_sides(A)
        return lhs == rhs

    @staticmethod
    def _toeplitz() -> bool:
        return all(
            determinant_exact(toeplitz_matrix(k, m)) == toeplitz_det(k, m)
            for k in range(TOEPLITZ_LIMIT + 1)
            for m in range(TOEPLITZ_LIMIT + 1)
        )


class TetraSuite(BaseSuite):
    """Tetrahedron equation at n=4 and the lexicographic compositions for any n."""

    name = "tetra"

    def run_trial(self, trial: Trial) -> IdentityReport:
        coords = random_coords(trial.n, trial.rng, trial.coord_max)
        results = []
        for kind in TransformKind:
            target = lex_target(coords, kind)
            results.append(exact_check(f"lex composition {kind.value}", lex_composition(coords, kind) == target))
            results.append(exact_check(
                f"lex composition {kind.value} ascending", lex_composition(coords, kind, descending=False) == target
            ))
        for t in triples(trial.n):
            a, b, c = t
            results.append(exact_check(
                "L and R are involutions",
                l_transform(l_transform(coords, a, b, c), a, b, c) == coords
                and r_transform(r_transform(coords, a, b, c), a, b, c) == coords,
            ))
            results.append(exact_check(
                "solved inverses agree",
                l_inverse(coords, a, b, c) == l_transform(coords, a, b, c)
                and r_inverse(coords, a, b, c) == r_transform(coords, a, b, c),
            ))
        if trial.n == 4:
            results.append(exact_check("tetrahedron equation", verify_tetrahedron(coords)))
            first, _ = tetrahedron_chains(TransformKind.L)
            _, second = tetrahedron_chains(TransformKind.R)
            results.append(exact_check(
                "swapped L/R chain is detected", apply_chain(coords, first) != apply_chain(coords, second)
            ))
        return trial.report(_dedupe(results))


class MrhoSuite(BaseSuite):
    """The S₃ relation on Ñ_n^+, its failure off it, and the y-ratio laws on N_n^+."""

    name = "mrho"

    def run_trial(self, trial: Trial) -> IdentityReport:
        generic = random_coords(trial.n, trial.rng, trial.coord_max)
        tilde = project_to_tilde(generic)
        results = [
            exact_check("projection lands in the subvariety", q_values(tilde).is_tilde),
            exact_check("mirrored constraints hold on the subvariety", all(v == 1 for v in q_values_upper(tilde).values())),
            exact_check("mrho on the subvariety", verify_mrho(tilde)),
            exact_check("D criterion on the subvariety", mrho_d_criterion(tilde)),
            exact_check("(D_M P)^2 is scalar on the subvariety", dp_square_is_scalar(tilde)),
            exact_check("S3 action on the subvariety", verify_s3_action(tilde)),
            exact_check("Q inversion", q_inversion_holds(generic)),
            exact_check("y-ratio laws", not y_ratio_law_failures(generic)),
        ]
        if trial.is_first:
            witness = JacobiCoords.constant(4).replace({(1, 2): 2})
            results.append(exact_check("mrho fails on a generic witness", not verify_mrho(witness)))
        return trial.report(results)


def _dedupe(results: List[IdentityResult]) -> List[IdentityResult]:
    """Collapse repeated checks of one name into a single result that fails if any did."""
    by_name = {}
    for result in results:
        if result.name not in by_name or not result.passed:
            by_name[result.name] = result
    return list(by_name.values())
