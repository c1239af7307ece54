"""
Numerical consequences of the wedge relation Σ X ∧ (1-X) = 0.

The relation itself lives in an exterior square of rational functions and is
not computed here. What is checked:

- the minor-ratio forms of X, 1-X (and X', W) exactly;
- the 2-form Σ d log X ∧ d log(1-X) by central differences in log-coordinates;
- the regulator 1-form Σ log X d log(1-X) - log(1-X) d log X, which is twice
  the derivative of Σ L(X) and so vanishes only when the relation holds;
- second-order convergence of the central differences themselves, against a
  reference step near the rounding optimum;
- the conclusion that Σ l(Y(M)) + Σ l(Y(M')) does not depend on M.

Every single term d log X ∧ d log(1-X) vanishes identically because X and 1-X
are functionally dependent, so the 2-form check is a finite-difference
consistency check; the regulator is what detects a missing family.
"""

import logging
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .core import JacobiCoords, SquareMatrix, Triple, flag_minor_right, flag_minor_upper, interval, jacobi_to_matrix, pairs, triples, union
from .dilog import BigFloat, DilogEngine, get_engine
from .identities import dilog_sum, tetrahedron_size
from .involutions import dprime, prime
from .utils.sampling import random_coords, trial_rng
from .yvars import YFamily, y_values

logger = logging.getLogger(__name__)

MAX_STEP = 1e-3
DEFAULT_STEP = 1e-6
HALVING_STEP = 1e-4
MIN_HALVING_RATE = 3.5


class WedgeKind(str, Enum):
    X = "X"
    W = "W"

    @property
    def family(self) -> YFamily:
        return YFamily.Y_LOWER if self is WedgeKind.X else YFamily.Y_UPPER


@dataclass(frozen=True)
class TangentVector:
    """Direction in log x_ij coordinates, in the order of pairs(n)."""

    n: int
    values: Tuple[Fraction, ...]

    def __post_init__(self):
        values = tuple(Fraction(v) for v in self.values)
        if len(values) != len(pairs(self.n)):
            raise ValueError(f"tangent vector for n={self.n} needs {len(pairs(self.n))} components")
        object.__setattr__(self, "values", values)

    @classmethod
    def random(cls, n: int, rng: random.Random) -> "TangentVector":
        values = [Fraction(rng.randint(-1000, 1000), 1000) for _ in pairs(n)]
        if not any(values):
            values[0] = Fraction(1)
        return cls(n, tuple(values))

    @classmethod
    def basis(cls, n: int, pair: Tuple[int, int]) -> "TangentVector":
        return cls(n, tuple(Fraction(int(p == tuple(pair))) for p in pairs(n)))

    def __getitem__(self, pair: Tuple[int, int]) -> Fraction:
        return self.values[pairs(self.n).index(tuple(pair))]

    @property
    def is_zero(self) -> bool:
        return not any(self.values)


@dataclass(frozen=True)
class WedgeResidual:
    value: BigFloat
    scale: BigFloat

    @property
    def relative(self) -> BigFloat:
        return self.value / self.scale if self.scale else self.value


# ----------------------------
# X-variables
# ----------------------------
def x_variables(M: SquareMatrix, kind: WedgeKind, image: bool = False) -> Dict[Triple, Fraction]:
    """
    X = Y/(1+Y) from Y_abc (kind X) or Y^abc (kind W). With `image`, the
    partner family: X' from M', or W'' from M''.
    """
    kind = WedgeKind(kind)
    if image:
        M = prime(M) if kind is WedgeKind.X else dprime(M)
    return {t: y / (1 + y) for t, y in y_values(M, kind.family).items()}


def x_minor_forms(M: SquareMatrix, t: Sequence[int], kind: WedgeKind = WedgeKind.X) -> Tuple[Fraction, Fraction]:
    """X and 1-X as ratios of flag minors; for kind W the same ratios in upper minors, swapped."""
    n = M.n
    a, b, c = t
    flag = flag_minor_upper if WedgeKind(kind) is WedgeKind.W else flag_minor_right
    p = flag(M, union(interval(a, b - 1), interval(c + 1, n))) * flag(M, union(interval(a + 1, b), interval(c, n)))
    q = flag(M, union(interval(a, b), interval(c + 1, n))) * flag(M, union(interval(a + 1, b - 1), interval(c, n)))
    r = flag(M, union(interval(a + 1, b), interval(c + 1, n))) * flag(M, union(interval(a, b - 1), interval(c, n)))
    if WedgeKind(kind) is WedgeKind.W:
        return q / r, p / r
    return p / r, q / r


def x_prime_minor_forms(M: SquareMatrix, t: Sequence[int]) -> Tuple[Fraction, Fraction]:
    """X' and 1-X' as ratios of right flag minors of M itself."""
    n = M.n
    a, b, c = t

    def flag(lo_end: int, hi_start: int, hi_end: int) -> Fraction:
        return flag_minor_right(M, union(interval(1, lo_end), interval(hi_start, hi_end)))

    denominator = flag(n - c, n + 1 - b, n - a) * flag(n + 1 - c, n + 2 - b, n + 1 - a)
    x = flag(n - c, n + 2 - b, n + 1 - a) * flag(n + 1 - c, n + 1 - b, n - a) / denominator
    one_minus_x = flag(n - c, n + 1 - b, n + 1 - a) * flag(n + 1 - c, n + 2 - b, n - a) / denominator
    return x, one_minus_x


def minor_form_failures(M: SquareMatrix) -> List[str]:
    """Triples where a minor-ratio form disagrees with Y/(1+Y)."""
    failures = []
    xs = x_variables(M, WedgeKind.X)
    x_primes = x_variables(M, WedgeKind.X, image=True)
    ws = x_variables(M, WedgeKind.W)
    for t in triples(M.n):
        x, one_minus_x = x_minor_forms(M, t, WedgeKind.X)
        if x != xs[t] or one_minus_x != 1 - xs[t]:
            failures.append(f"X{t}")
        w, one_minus_w = x_minor_forms(M, t, WedgeKind.W)
        if w != ws[t] or one_minus_w != 1 - ws[t]:
            failures.append(f"W{t}")
        x_prime, one_minus_x_prime = x_prime_minor_forms(M, t)
        if x_prime != x_primes[t] or one_minus_x_prime != 1 - x_primes[t]:
            failures.append(f"X'{t}")
    return failures


# ----------------------------
# Differential checks
# ----------------------------
def _check_step(step: float) -> None:
    if not 0 < step <= MAX_STEP:
        raise ValueError(f"finite-difference step must lie in (0, {MAX_STEP}], got {step}")


def _perturb(coords: JacobiCoords, u: TangentVector, t: BigFloat, engine: DilogEngine) -> JacobiCoords:
    """x_ij exp(t u_ij), carried as the exact binary values of the rounded results."""
    ctx = engine.ctx
    return JacobiCoords(
        coords.n,
        tuple(
            engine.to_rational(engine.to_bigfloat(x) * ctx.exp(t * engine.to_bigfloat(d)))
            for x, d in zip(coords.values, u.values)
        ),
    )


def _log_pairs(coords: JacobiCoords, kind: WedgeKind, include_image: bool, engine: DilogEngine) -> List[Tuple[BigFloat, BigFloat]]:
    """(log X_k, log(1-X_k)) over the family and optionally its partner."""
    M = jacobi_to_matrix(coords)
    families = [x_variables(M, kind)]
    if include_image:
        families.append(x_variables(M, kind, image=True))
    ctx = engine.ctx
    logs = []
    for family in families:
        for t in triples(coords.n):
            x = family[t]
            logs.append((ctx.log(engine.to_bigfloat(x)), ctx.log(engine.to_bigfloat(1 - x))))
    return logs


def _directional(
    coords: JacobiCoords, u: TangentVector, kind: WedgeKind, include_image: bool, step: float, engine: DilogEngine
) -> List[Tuple[BigFloat, BigFloat]]:
    """Central differences of (log X_k, log(1-X_k)) along u."""
    h = engine.to_bigfloat(Fraction(step))
    plus = _log_pairs(_perturb(coords, u, h, engine), kind, include_image, engine)
    minus = _log_pairs(_perturb(coords, u, -h, engine), kind, include_image, engine)
    return [((p[0] - m[0]) / (2 * h), (p[1] - m[1]) / (2 * h)) for p, m in zip(plus, minus)]


def two_form_residual(
    coords: JacobiCoords,
    u: TangentVector,
    v: TangentVector,
    kind: WedgeKind = WedgeKind.X,
    step: float = DEFAULT_STEP,
    include_image: bool = True,
    engine: Optional[DilogEngine] = None,
) -> WedgeResidual:
    """|Σ_k D_u log X_k D_v log(1-X_k) - D_v log X_k D_u log(1-X_k)| and the sum of term sizes."""
    _check_step(step)
    if u.is_zero or v.is_zero:
        raise ValueError("tangent vectors must be nonzero")
    engine = engine or get_engine()
    kind = WedgeKind(kind)
    du = _directional(coords, u, kind, include_image, step, engine)
    dv = du if v == u else _directional(coords, v, kind, include_image, step, engine)
    total = engine.ctx.zero
    scale = engine.ctx.zero
    for (du_x, du_1mx), (dv_x, dv_1mx) in zip(du, dv):
        first = du_x * dv_1mx
        second = dv_x * du_1mx
        total += first - second
        scale += abs(first) + abs(second)
    return WedgeResidual(abs(total), scale)


def regulator_residual(
    coords: JacobiCoords,
    u: TangentVector,
    kind: WedgeKind = WedgeKind.X,
    step: float = DEFAULT_STEP,
    include_image: bool = True,
    engine: Optional[DilogEngine] = None,
) -> WedgeResidual:
    """|Σ_k log X_k D_u log(1-X_k) - log(1-X_k) D_u log X_k|, i.e. twice |D_u Σ L(X_k)|."""
    _check_step(step)
    if u.is_zero:
        raise ValueError("tangent vector must be nonzero")
    engine = engine or get_engine()
    kind = WedgeKind(kind)
    logs = _log_pairs(coords, kind, include_image, engine)
    derivatives = _directional(coords, u, kind, include_image, step, engine)
    total = engine.ctx.zero
    scale = engine.ctx.zero
    for (log_x, log_1mx), (d_x, d_1mx) in zip(logs, derivatives):
        first = log_x * d_1mx
        second = log_1mx * d_x
        total += first - second
        scale += abs(first) + abs(second)
    return WedgeResidual(abs(total), scale)


# ----------------------------
# Convergence of the differences
# ----------------------------
@dataclass(frozen=True)
class StepHalving:
    coarse: WedgeResidual
    halved: WedgeResidual

    @property
    def rate(self) -> Optional[BigFloat]:
        return self.coarse.value / self.halved.value if self.halved.value else None

    def converges(self, floor: BigFloat) -> bool:
        """Halving the step cuts the error MIN_HALVING_RATE times, or the halved error is already at the floor."""
        if self.halved.relative <= floor:
            return True
        return self.coarse.value >= MIN_HALVING_RATE * self.halved.value


def reference_step(engine: DilogEngine) -> float:
    """About 2^(-bits/3), where truncation and rounding errors of a central difference balance."""
    return 2.0 ** -(engine.precision_bits // 3)


def _difference_error(
    approx: List[Tuple[BigFloat, BigFloat]], reference: List[Tuple[BigFloat, BigFloat]], engine: DilogEngine
) -> WedgeResidual:
    value = engine.ctx.zero
    scale = engine.ctx.zero
    for (a_x, a_1mx), (r_x, r_1mx) in zip(approx, reference):
        value += abs(a_x - r_x) + abs(a_1mx - r_1mx)
        scale += abs(r_x) + abs(r_1mx)
    return WedgeResidual(value, scale)


def derivative_error(
    coords: JacobiCoords,
    u: TangentVector,
    kind: WedgeKind = WedgeKind.X,
    step: float = HALVING_STEP,
    include_image: bool = True,
    engine: Optional[DilogEngine] = None,
) -> WedgeResidual:
    """Σ_k |D_u^h log X_k - D_u log X_k| + |D_u^h log(1-X_k) - D_u log(1-X_k)|, derivatives taken at reference_step."""
    _check_step(step)
    if u.is_zero:
        raise ValueError("tangent vector must be nonzero")
    engine = engine or get_engine()
    kind = WedgeKind(kind)
    reference = _directional(coords, u, kind, include_image, reference_step(engine), engine)
    return _difference_error(_directional(coords, u, kind, include_image, step, engine), reference, engine)


def step_halving(
    coords: JacobiCoords,
    u: TangentVector,
    kind: WedgeKind = WedgeKind.X,
    step: float = HALVING_STEP,
    include_image: bool = True,
    engine: Optional[DilogEngine] = None,
) -> StepHalving:
    """Truncation errors of the central differences at `step` and `step / 2`."""
    _check_step(step)
    if u.is_zero:
        raise ValueError("tangent vector must be nonzero")
    engine = engine or get_engine()
    kind = WedgeKind(kind)
    reference = _directional(coords, u, kind, include_image, reference_step(engine), engine)
    coarse, halved = (
        _difference_error(_directional(coords, u, kind, include_image, h, engine), reference, engine)
        for h in (step, step / 2)
    )
    return StepHalving(coarse, halved)


# ----------------------------
# Constancy
# ----------------------------
@dataclass(frozen=True)
class ConstancyProbe:
    n: int
    family: YFamily
    values: Tuple[BigFloat, ...]
    target: int

    @property
    def spread(self) -> BigFloat:
        return max(self.values) - min(self.values)

    @property
    def deviation(self) -> BigFloat:
        return max(abs(v - self.target) for v in self.values)


def paired_sum(M: SquareMatrix, family: YFamily, engine: DilogEngine) -> BigFloat:
    """Σ l(f(M)) + Σ l(f(M')); the same for every M and every family."""
    return dilog_sum(M, family, engine=engine) + dilog_sum(prime(M), family, engine=engine)


def constancy_probe(
    n: int,
    family: YFamily = YFamily.Y_LOWER,
    trials: int = 50,
    seed: int = 0,
    coord_max: int = 10,
    engine: Optional[DilogEngine] = None,
) -> ConstancyProbe:
    if n < 3:
        raise ValueError(f"constancy probe needs n >= 3, got {n}")
    engine = engine or get_engine()
    family = YFamily(family)
    values = tuple(
        paired_sum(jacobi_to_matrix(random_coords(n, trial_rng(seed, i), coord_max)), family, engine)
        for i in range(trials)
    )
    probe = ConstancyProbe(n, family, values, tetrahedron_size(n))
    logger.debug(f"Constancy probe n={n} {family.value}: spread {probe.spread}")
    return probe
