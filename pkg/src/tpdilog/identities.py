"""
Verification of the dilogarithm identities over the discrete tetrahedron.

Every check returns an IdentityReport: one IdentityResult per identity with
its worst residual and the tolerance it was judged against. Exact checks
carry rational residuals and a zero tolerance.
"""

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import reduce
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union


from .core import JacobiCoords, SquareMatrix, jacobi_to_matrix, matrix_to_jacobi
from .dilog import BigFloat, DilogEngine, bigfloat_to_fraction, format_bigfloat, get_engine, solve_xyz, xyz_delta
from .involutions import check_g, hat_g, jacobi_dprime, jacobi_prime, split_left_diagonal, split_right_diagonal
from .yvars import YFamily, y_values

logger = logging.getLogger(__name__)

Residual = Union[Fraction, BigFloat]


# ----------------------------
# Reports
# ----------------------------
@dataclass(frozen=True)
class IdentityResult:
    name: str
    max_residual: Residual
    tolerance: Residual
    passed: bool
    exact: bool = False

    def to_document(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "max_residual": format_bigfloat(self.max_residual),
            "tolerance": format_bigfloat(self.tolerance),
            "pass": self.passed,
            "exact": self.exact,
        }

    @classmethod
    def from_document(cls, document: Dict[str, object], precision_bits: int) -> "IdentityResult":
        exact = bool(document.get("exact", False))
        parse = Fraction if exact else get_engine(precision_bits).to_bigfloat
        return cls(
            name=str(document["name"]),
            max_residual=parse(str(document["max_residual"])),
            tolerance=parse(str(document.get("tolerance", "0"))),
            passed=bool(document["pass"]),
            exact=exact,
        )


def exact_result(name: str, residual: Fraction) -> IdentityResult:
    residual = abs(Fraction(residual))
    return IdentityResult(name, residual, Fraction(0), residual == 0, exact=True)


def exact_check(name: str, holds: bool) -> IdentityResult:
    """An exact identity observed only as true/false; failure is reported as residual 1."""
    return exact_result(name, Fraction(0 if holds else 1))


def numeric_result(name: str, residual: BigFloat, tolerance: BigFloat) -> IdentityResult:
    return IdentityResult(name, residual, tolerance, bool(residual <= tolerance))


def spread(values: Sequence[BigFloat]) -> BigFloat:
    """max - min, i.e. the largest pairwise difference."""
    return max(values) - min(values)


def deviation(values: Iterable[BigFloat], target: Residual) -> BigFloat:
    return max(abs(v - target) for v in values)


@dataclass(frozen=True)
class IdentityReport:
    n: int
    trials: int
    seed: int
    precision_bits: int
    results: Tuple[IdentityResult, ...] = ()
    elapsed: Optional[float] = None

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> List[IdentityResult]:
        return [r for r in self.results if not r.passed]

    def to_document(self, with_timing: bool = False) -> Dict[str, object]:
        document = {
            "n": self.n,
            "seed": self.seed,
            "precision_bits": self.precision_bits,
            "trials": self.trials,
            "pass": self.passed,
            "identities": [r.to_document() for r in self.results],
        }
        if with_timing and self.elapsed is not None:
            document["elapsed_seconds"] = round(self.elapsed, 3)
        return document

    @classmethod
    def from_document(cls, document: Dict[str, object]) -> "IdentityReport":
        precision_bits = int(document["precision_bits"])
        elapsed = document.get("elapsed_seconds")
        return cls(
            n=int(document["n"]),
            trials=int(document.get("trials", 1)),
            seed=int(document["seed"]),
            precision_bits=precision_bits,
            results=tuple(IdentityResult.from_document(r, precision_bits) for r in document.get("identities", [])),
            elapsed=float(elapsed) if elapsed is not None else None,
        )


def _merge_result(a: IdentityResult, b: IdentityResult) -> IdentityResult:
    worse = a if bigfloat_to_fraction(a.max_residual) >= bigfloat_to_fraction(b.max_residual) else b
    tolerance = a.tolerance if bigfloat_to_fraction(a.tolerance) >= bigfloat_to_fraction(b.tolerance) else b.tolerance
    return IdentityResult(a.name, worse.max_residual, tolerance, a.passed and b.passed, a.exact and b.exact)


def _merge_pair(a: IdentityReport, b: IdentityReport) -> IdentityReport:
    if (a.n, a.precision_bits) != (b.n, b.precision_bits):
        raise ValueError(
            f"cannot merge reports for n={a.n}/{a.precision_bits} bits and n={b.n}/{b.precision_bits} bits"
        )
    by_name: Dict[str, IdentityResult] = {r.name: r for r in a.results}
    for r in b.results:
        by_name[r.name] = _merge_result(by_name[r.name], r) if r.name in by_name else r
    elapsed = a.elapsed + b.elapsed if a.elapsed is not None and b.elapsed is not None else None
    return IdentityReport(
        n=a.n,
        trials=a.trials + b.trials,
        seed=min(a.seed, b.seed),
        precision_bits=a.precision_bits,
        results=tuple(by_name[name] for name in sorted(by_name)),
        elapsed=elapsed,
    )


def merge_reports(reports: Iterable[IdentityReport]) -> IdentityReport:
    """Associative, commutative merge: worst residuals, summed trials, smallest seed."""
    reports = list(reports)
    if not reports:
        raise ValueError("no reports to merge")
    first = replace(reports[0], results=tuple(sorted(reports[0].results, key=lambda r: r.name)))
    return reduce(_merge_pair, reports[1:], first)


def single_report(M: SquareMatrix, engine: DilogEngine, results: Iterable[IdentityResult], seed: int = 0) -> IdentityReport:
    return IdentityReport(n=M.n, trials=1, seed=seed, precision_bits=engine.precision_bits, results=tuple(results))


# ----------------------------
# S₃ words
# ----------------------------
_GENERATOR_PERMUTATIONS = {1: (2, 1, 3), 2: (1, 3, 2)}


def _compose(p: Tuple[int, ...], q: Tuple[int, ...]) -> Tuple[int, ...]:
    """p after q."""
    return tuple(p[q[i] - 1] for i in range(3))


@dataclass(frozen=True)
class S3Word:
    """
    Reduced word in σ₁, σ₂, read right to left: S3Word((2, 1)) is σ₂σ₁ and
    sends M to (M')''.
    """

    generators: Tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        gens = tuple(self.generators)
        if len(gens) > 3 or any(g not in (1, 2) for g in gens):
            raise ValueError(f"not a reduced S3 word: {gens}")
        if any(a == b for a, b in zip(gens, gens[1:])):
            raise ValueError(f"word {gens} repeats a generator")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def parse(cls, text: str) -> "S3Word":
        """'id', 's1', 's2s1', 's1s2s1' ... (σ is accepted for s)."""
        cleaned = text.strip().replace("σ", "s")
        if cleaned in ("", "id"):
            return cls(())
        if len(cleaned) % 2 or any(cleaned[i] != "s" for i in range(0, len(cleaned), 2)):
            raise ValueError(f"cannot parse S3 word {text!r}")
        try:
            return cls(tuple(int(cleaned[i]) for i in range(1, len(cleaned), 2)))
        except ValueError:
            raise ValueError(f"cannot parse S3 word {text!r}") from None

    def __str__(self):
        return "".join(f"s{g}" for g in self.generators) or "id"

    @property
    def sign(self) -> int:
        return -1 if len(self.generators) % 2 else 1

    @property
    def permutation(self) -> Tuple[int, ...]:
        result = (1, 2, 3)
        for g in self.generators:
            result = _compose(result, _GENERATOR_PERMUTATIONS[g])
        return result

    def __mul__(self, other: "S3Word") -> "S3Word":
        """Group product; `self * other` applies other first."""
        return S3Word.from_permutation(_compose(self.permutation, other.permutation))

    @classmethod
    def from_permutation(cls, permutation: Sequence[int]) -> "S3Word":
        permutation = tuple(permutation)
        for word in S3_ELEMENTS:
            if word.permutation == permutation:
                return word
        raise ValueError(f"{permutation} is not a permutation of (1, 2, 3)")


S3_WORDS: Tuple[S3Word, ...] = tuple(
    S3Word(g) for g in ((), (1,), (2,), (1, 2), (2, 1), (1, 2, 1), (2, 1, 2))
)
S3_ELEMENTS: Tuple[S3Word, ...] = S3_WORDS[:6]


def s3_coords(coords: JacobiCoords, word: S3Word) -> JacobiCoords:
    for g in reversed(word.generators):
        coords = jacobi_prime(coords) if g == 1 else jacobi_dprime(coords)
    return coords


def s3_value(M: SquareMatrix, word: S3Word) -> SquareMatrix:
    """Apply ′ for σ₁ and ″ for σ₂, rightmost generator first."""
    if not word.generators:
        return M
    return jacobi_to_matrix(s3_coords(matrix_to_jacobi(M), word))


# ----------------------------
# Dilogarithm sums
# ----------------------------
def tetrahedron_size(n: int) -> int:
    """|T_n| = n(n-1)(n-2)/6."""
    return comb(n, 3)


def family_values(M: SquareMatrix, family: YFamily) -> List[Fraction]:
    return list(y_values(M, family).values())


def dilog_sum(M: SquareMatrix, family: YFamily, invert: bool = False, engine: Optional[DilogEngine] = None) -> BigFloat:
    """Σ over T_n of l(Y) or l(1/Y)."""
    engine = engine or get_engine()
    return engine.dilog_terms(family_values(M, family), invert)


def _tolerance(engine: DilogEngine, tol: Optional[BigFloat]) -> BigFloat:
    return engine.default_tolerance() if tol is None else engine.to_bigfloat(tol)


def verify_sum_constant(
    M: SquareMatrix, engine: Optional[DilogEngine] = None, tol: Optional[BigFloat] = None, seed: int = 0
) -> IdentityReport:
    """Σ l(Y(M)) + Σ l(Y(M')) and Σ l(Y^(M)) + Σ l(Y^(M'')) both equal |T_n|."""
    engine = engine or get_engine()
    tol = _tolerance(engine, tol)
    coords = matrix_to_jacobi(M)
    m_prime = jacobi_to_matrix(jacobi_prime(coords))
    m_dprime = jacobi_to_matrix(jacobi_dprime(coords))
    target = tetrahedron_size(M.n)
    lower = dilog_sum(M, YFamily.Y_LOWER, engine=engine) + dilog_sum(m_prime, YFamily.Y_LOWER, engine=engine)
    upper = dilog_sum(M, YFamily.Y_UPPER, engine=engine) + dilog_sum(m_dprime, YFamily.Y_UPPER, engine=engine)
    results = [
        numeric_result("sum constant Y_abc(M) + Y_abc(M')", abs(lower - target), tol),
        numeric_result("sum constant Y^abc(M) + Y^abc(M'')", abs(upper - target), tol),
    ]
    for family in YFamily:
        pairing = dilog_sum(M, family, False, engine) + dilog_sum(M, family, True, engine)
        results.append(numeric_result(f"termwise inversion {family.value}", abs(pairing - target), tol))
    return single_report(M, engine, results, seed)


def chain_sums(M: SquareMatrix, engine: DilogEngine, corrupt: bool = False) -> Dict[YFamily, List[BigFloat]]:
    """Per family: [Σ l(f(M')), Σ l(1/f(M)), Σ l(f(M''))]."""
    coords = matrix_to_jacobi(M)
    m_prime = jacobi_to_matrix(jacobi_prime(coords))
    m_dprime = jacobi_to_matrix(jacobi_dprime(coords))
    sums = {}
    for family in YFamily:
        at_prime = family_values(m_prime, family)
        if corrupt and family is YFamily.Y_LOWER:
            logger.warning("Corrupting Y_abc(M') for a negative-control run")
            at_prime[0] *= 2
        sums[family] = [
            engine.dilog_terms(at_prime),
            engine.dilog_terms(family_values(M, family), invert=True),
            engine.dilog_terms(family_values(m_dprime, family)),
        ]
    return sums


def verify_chain(
    M: SquareMatrix,
    engine: Optional[DilogEngine] = None,
    tol: Optional[BigFloat] = None,
    corrupt: bool = False,
    seed: int = 0,
) -> IdentityReport:
    """All twelve sums of the chain agree."""
    engine = engine or get_engine()
    tol = _tolerance(engine, tol)
    sums = chain_sums(M, engine, corrupt)
    results = [numeric_result(f"chain {family.value}", spread(values), tol) for family, values in sums.items()]
    everything = [v for values in sums.values() for v in values]
    results.append(numeric_result("chain all families", spread(everything), tol))
    return single_report(M, engine, results, seed)


def s3_form_sum(M: SquareMatrix, family: YFamily, word: S3Word, engine: DilogEngine) -> BigFloat:
    """Σ l(Y(s(M))^sgn(s))."""
    return engine.dilog_terms(family_values(s3_value(M, word), family), invert=word.sign < 0)


# Family order of the four sums in the S₃ form of the chain.
S3_FORM_FAMILIES = (YFamily.Y_LOWER, YFamily.Y_UPPER_TILDE, YFamily.Y_LOWER_TILDE, YFamily.Y_UPPER)


def verify_s3_form(
    M: SquareMatrix,
    words: Optional[Sequence[S3Word]] = None,
    engine: Optional[DilogEngine] = None,
    tol: Optional[BigFloat] = None,
    seed: int = 0,
) -> IdentityReport:
    """
    With four words, the four sums agree. Without words every (family, word)
    sum is computed once; since each sum depends on a single word this covers
    every choice of four words.
    """
    engine = engine or get_engine()
    tol = _tolerance(engine, tol)
    if words is not None:
        if len(words) != 4:
            raise ValueError(f"S3 form takes one word per family, got {len(words)}")
        values = [s3_form_sum(M, family, word, engine) for family, word in zip(S3_FORM_FAMILIES, words)]
        label = ",".join(str(w) for w in words)
        return single_report(M, engine, [numeric_result(f"s3 form ({label})", spread(values), tol)], seed)
    values = {
        (family, word): s3_form_sum(M, family, word, engine) for family in S3_FORM_FAMILIES for word in S3_WORDS
    }
    results = [
        numeric_result(f"s3 form {word}", spread([values[(f, word)] for f in S3_FORM_FAMILIES]), tol)
        for word in S3_WORDS
    ]
    results.append(numeric_result("s3 form all words", spread(list(values.values())), tol))
    return single_report(M, engine, results, seed)


def verify_b_version(
    G: SquareMatrix, engine: Optional[DilogEngine] = None, tol: Optional[BigFloat] = None, seed: int = 0
) -> IdentityReport:
    """The chain with M, M', M'' replaced by G, Ǧ, Ĝ, and Y-invariance under diagonal scaling."""
    engine = engine or get_engine()
    tol = _tolerance(engine, tol)
    g_check = check_g(G)
    g_hat = hat_g(G)
    everything = []
    results = []
    for family in YFamily:
        values = [
            engine.dilog_terms(family_values(g_check, family)),
            engine.dilog_terms(family_values(G, family), invert=True),
            engine.dilog_terms(family_values(g_hat, family)),
        ]
        everything.extend(values)
        results.append(numeric_result(f"b-chain {family.value}", spread(values), tol))
    results.append(numeric_result("b-chain all families", spread(everything), tol))

    right_unipotent, _ = split_right_diagonal(G)
    _, left_unipotent = split_left_diagonal(G)
    scaled = all(
        y_values(G, family) == y_values(right_unipotent, family) == y_values(left_unipotent, family)
        for family in YFamily
    )
    results.append(exact_check("diagonal scaling leaves Y unchanged", scaled))
    return single_report(G, engine, results, seed)


def verify_script_l(
    G: SquareMatrix, engine: Optional[DilogEngine] = None, tol: Optional[BigFloat] = None, seed: int = 0
) -> IdentityReport:
    """ℒ(Ǧ) = ℒ(Ĝ) = 4 - ℒ(G) on B_4^+, with the F(x, y, z) form when δ != 0."""
    engine = engine or get_engine()
    tol = _tolerance(engine, tol)
    value = engine.script_l(G)
    value_check = engine.script_l(check_g(G))
    value_hat = engine.script_l(hat_g(G))
    results = [
        numeric_result("script-L check", abs(value_check - (4 - value)), tol),
        numeric_result("script-L hat", abs(value_hat - (4 - value)), tol),
    ]
    M, _ = split_right_diagonal(G)
    coords = matrix_to_jacobi(M)
    solution = solve_xyz(coords)
    if solution is None:
        results.append(numeric_result("script-L degenerate value 2", deviation([value, value_check, value_hat], 2), tol))
    else:
        x, y, z = solution.as_tuple()
        results.append(exact_check("x, y, z on one branch", solution.is_positive_branch or solution.is_negative_branch))
        if solution.is_positive_branch:
            results.extend([
                numeric_result("script-L = F(x,y,z)", abs(value - engine.f_xyz(x, y, z)), tol),
                numeric_result("script-L check = 4 - F(z,y,x)", abs(value_check - (4 - engine.f_xyz(z, y, x))), tol),
                numeric_result("script-L hat = 4 - F(x,z,y)", abs(value_hat - (4 - engine.f_xyz(x, z, y))), tol),
            ])
        else:
            logger.debug(f"δ = {xyz_delta(coords)} < 0: F comparison skipped on the negative branch")
    return single_report(G, engine, results, seed)


def verify_function(
    x: Fraction, y: Fraction, z: Fraction, engine: Optional[DilogEngine] = None, tol: Optional[BigFloat] = None
) -> List[IdentityResult]:
    """Symmetry of F, its closed form, and the functional equations of l at one point."""
    engine = engine or get_engine()
    tol = _tolerance(engine, tol)
    orders = [(x, y, z), (y, x, z), (x, z, y), (z, y, x), (y, z, x), (z, x, y)]
    values = [engine.f_xyz(*args) for args in orders]
    return [
        numeric_result("F symmetry", spread(values), tol),
        numeric_result("F closed form", abs(values[0] - engine.f_xyz_closed(x, y, z)), tol),
        numeric_result("pentagon", engine.pentagon_residual(x, y), tol),
        numeric_result("inversion", max(engine.inversion_residual(v) for v in (x, y, z)), tol),
    ]
