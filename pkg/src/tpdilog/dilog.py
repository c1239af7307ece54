"""
High-precision Rogers dilogarithm and the functions built from it.

l(x) = (6/π²) L(x/(1+x)) with L(u) = Li₂(u) + ½ log u log(1-u). Li₂ is summed
as a power series after reflecting the argument into [0, 1/2], so every term
count is bounded by the working precision. Arithmetic runs in a private
mpmath context per precision; contexts are never mutated after construction.
"""

import logging
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple, Union

import mpmath

from .core import InvalidIndexError, JacobiCoords, SquareMatrix, require_totally_positive, triples
from .yvars import YFamily, y_values

logger = logging.getLogger(__name__)

DEFAULT_PRECISION_BITS = 128
GUARD_BITS = 24
MIN_PRECISION_BITS = 53

BigFloat = mpmath.mpf
Real = Union[Fraction, int, BigFloat]


class DilogEngine:
    """Evaluation of l, F and ℒ at a fixed binary precision."""

    def __init__(self, precision_bits: int = DEFAULT_PRECISION_BITS):
        if precision_bits < MIN_PRECISION_BITS:
            raise ValueError(f"precision must be at least {MIN_PRECISION_BITS} bits, got {precision_bits}")
        self.precision_bits = precision_bits
        self.ctx = mpmath.MPContext()
        self.ctx.prec = precision_bits + GUARD_BITS
        self.pi = +self.ctx.pi
        self.zeta2 = self.pi ** 2 / 6
        self.epsilon = self.ctx.ldexp(1, -self.ctx.prec)
        logger.debug(f"Dilogarithm engine ready at {precision_bits} bits (+{GUARD_BITS} guard)")

    # ----------------------------
    # Conversions
    # ----------------------------
    def to_bigfloat(self, value: Real) -> BigFloat:
        """Round to the working precision; a Fraction costs one correctly rounded division."""
        if isinstance(value, Fraction):
            return self.ctx.fdiv(value.numerator, value.denominator)
        result = self.ctx.convert(value)
        if not self.ctx.isfinite(result):
            raise ValueError(f"value {value!r} is not finite")
        return result

    def to_rational(self, value: Real) -> Fraction:
        return bigfloat_to_fraction(self.ctx.convert(value))

    def default_tolerance(self) -> BigFloat:
        return self.ctx.ldexp(1, -(self.precision_bits // 2))

    def _coerce(self, *values: Real) -> Tuple[Real, ...]:
        # stay exact when every input is rational
        if all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for v in values):
            return tuple(Fraction(v) for v in values)
        return tuple(self.to_bigfloat(v) for v in values)

    # ----------------------------
    # Li₂ and L
    # ----------------------------
    def _li2_series(self, v: BigFloat) -> BigFloat:
        """Σ v^k/k² for 0 <= v <= 1/2."""
        ctx = self.ctx
        total = ctx.zero
        power = v
        k = 1
        while True:
            term = power / (k * k)
            total += term
            if term < self.epsilon:
                break
            k += 1
            power *= v
        return total

    def _big_l(self, u: BigFloat, w: BigFloat, log_u: BigFloat, log_w: BigFloat, reflect: Optional[bool]) -> BigFloat:
        # u + w = 1; logs passed in so callers can avoid cancellation in log(1-u)
        if reflect is None:
            reflect = u > 0.5
        half_product = log_u * log_w / 2
        if reflect:
            return self.zeta2 - half_product - self._li2_series(w)
        return self._li2_series(u) + half_product

    def big_l(self, u: Real, reflect: Optional[bool] = None) -> BigFloat:
        """
        Rogers dilogarithm L(u) on (0, 1).

        `reflect` forces one of the two reductions (None picks the one with
        series argument at most 1/2).
        """
        if isinstance(u, (int, Fraction)):
            u = Fraction(u)
            if not 0 < u < 1:
                raise ValueError(f"L(u) needs 0 < u < 1, got {u}")
            w = 1 - u
            u_big, w_big = self.to_bigfloat(u), self.to_bigfloat(w)
            return self._big_l(u_big, w_big, self.ctx.log(u_big), self.ctx.log(w_big), reflect)
        u = self.to_bigfloat(u)
        if not 0 < u < 1:
            raise ValueError(f"L(u) needs 0 < u < 1, got {mpmath.nstr(u, 8)}")
        return self._big_l(u, 1 - u, self.ctx.log(u), self.ctx.log1p(-u), reflect)

    def rogers_l(self, x: Real, reflect: Optional[bool] = None) -> BigFloat:
        """l(x) = (6/π²) L(x/(1+x)) for x > 0."""
        ctx = self.ctx
        if isinstance(x, (int, Fraction)):
            x = Fraction(x)
            if x <= 0:
                raise ValueError(f"l(x) needs x > 0, got {x}")
            u = self.to_bigfloat(x / (1 + x))
            w = self.to_bigfloat(1 / (1 + x))
            log_w = -ctx.log1p(self.to_bigfloat(x)) if x < 1 else ctx.log(w)
            return self._big_l(u, w, ctx.log(u), log_w, reflect) / self.zeta2
        x = self.to_bigfloat(x)
        if x <= 0:
            raise ValueError(f"l(x) needs x > 0, got {mpmath.nstr(x, 8)}")
        log1p_x = ctx.log1p(x)
        u = x / (1 + x)
        w = 1 / (1 + x)
        return self._big_l(u, w, ctx.log(x) - log1p_x, -log1p_x, reflect) / self.zeta2

    # ----------------------------
    # Functional equations
    # ----------------------------
    def inversion_residual(self, x: Real) -> BigFloat:
        """|l(x) + l(1/x) - 1|."""
        (x,) = self._coerce(x)
        return abs(self.rogers_l(x) + self.rogers_l(1 / x) - 1)

    def pentagon_residual(self, x: Real, y: Real) -> BigFloat:
        x, y = self._coerce(x, y)
        lhs = self.rogers_l(x) + self.rogers_l(y)
        rhs = self.rogers_l(x / (1 + y)) + self.rogers_l(x * y / (1 + x + y)) + self.rogers_l(y / (1 + x))
        return abs(lhs - rhs)

    def _require_positive(self, *values: Real) -> None:
        for value in values:
            if not value > 0:
                raise ValueError(f"F(x, y, z) is only evaluated on the positive branch, got {value}")

    def f_xyz(self, x: Real, y: Real, z: Real) -> BigFloat:
        """The four-term sum F(x, y, z), totally symmetric in its arguments."""
        x, y, z = self._coerce(x, y, z)
        self._require_positive(x, y, z)
        return self.ctx.fsum([
            self.rogers_l(x / (1 + y)),
            self.rogers_l((1 + x + y) * z / ((1 + x) * (1 + y))),
            self.rogers_l(x * y / ((1 + x + y) * (1 + z))),
            self.rogers_l(y / (1 + x)),
        ])

    def f_xyz_closed(self, x: Real, y: Real, z: Real) -> BigFloat:
        """l(x) + l(y) + l(z) - l(xyz / (1+x+y+z+xy+xz+yz))."""
        x, y, z = self._coerce(x, y, z)
        self._require_positive(x, y, z)
        w = x * y * z / (1 + x + y + z + x * y + x * z + y * z)
        return self.rogers_l(x) + self.rogers_l(y) + self.rogers_l(z) - self.rogers_l(w)

    # ----------------------------
    # ℒ on 4x4 matrices
    # ----------------------------
    def script_l_arguments(self, G: SquareMatrix) -> Dict[Tuple[int, int, int], Fraction]:
        if G.n != 4:
            raise InvalidIndexError(f"ℒ is defined on 4x4 matrices, got n={G.n}")
        require_totally_positive(G)
        return y_values(G, YFamily.Y_LOWER)

    def script_l(self, G: SquareMatrix) -> BigFloat:
        """ℒ(G) = Σ l(Y_abc(G)) over the four triples of T_4."""
        arguments = self.script_l_arguments(G)
        return self.ctx.fsum(self.rogers_l(arguments[t]) for t in triples(4))

    def dilog_terms(self, values: Sequence[Fraction], invert: bool = False) -> BigFloat:
        """Σ l(v) or Σ l(1/v), each v exact until the single conversion."""
        return self.ctx.fsum(self.rogers_l(1 / v if invert else v) for v in values)


_engines: Dict[int, DilogEngine] = {}
_engines_lock = threading.Lock()


def get_engine(precision_bits: int = DEFAULT_PRECISION_BITS) -> DilogEngine:
    """Shared engine per precision; created once under a lock."""
    with _engines_lock:
        engine = _engines.get(precision_bits)
        if engine is None:
            engine = DilogEngine(precision_bits)
            _engines[precision_bits] = engine
        return engine


def rogers_l(x: Real, precision_bits: int = DEFAULT_PRECISION_BITS) -> BigFloat:
    return get_engine(precision_bits).rogers_l(x)


def f_xyz(x: Real, y: Real, z: Real, precision_bits: int = DEFAULT_PRECISION_BITS) -> BigFloat:
    return get_engine(precision_bits).f_xyz(x, y, z)


def script_l(G: SquareMatrix, precision_bits: int = DEFAULT_PRECISION_BITS) -> BigFloat:
    return get_engine(precision_bits).script_l(G)


def bigfloat_to_fraction(value: Real) -> Fraction:
    """The exact binary value of an mpf; rationals pass through."""
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if not mpmath.isfinite(value):
        raise ValueError(f"value {value!r} is not finite")
    sign, man, exp, _ = value._mpf_
    man = -int(man) if sign else int(man)
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)


def format_bigfloat(value: object, digits: int = 8) -> str:
    if isinstance(value, (int, Fraction)):
        return str(value)
    return mpmath.nstr(value, digits)


# ----------------------------
# x, y, z from Jacobi coordinates
# ----------------------------
@dataclass(frozen=True)
class XYZ:
    """Solution of z/(1+y) = x12/x23, y/(1+x) = x13/x24, x/(1+z) = x23/x34."""

    x: Fraction
    y: Fraction
    z: Fraction

    @property
    def is_positive_branch(self) -> bool:
        return self.x > 0 and self.y > 0 and self.z > 0

    @property
    def is_negative_branch(self) -> bool:
        return self.x < -1 and self.y < -1 and self.z < -1

    def as_tuple(self) -> Tuple[Fraction, Fraction, Fraction]:
        return (self.x, self.y, self.z)


def xyz_delta(coords: JacobiCoords) -> Fraction:
    """δ = x24 x34 - x12 x13."""
    if coords.n != 4:
        raise InvalidIndexError(f"x, y, z are defined for n=4, got n={coords.n}")
    return coords[(2, 4)] * coords[(3, 4)] - coords[(1, 2)] * coords[(1, 3)]


def solve_xyz(coords: JacobiCoords) -> Optional[XYZ]:
    """Exact solution of the linear system, or None when δ = 0."""
    delta = xyz_delta(coords)
    if delta == 0:
        logger.debug("δ = 0: the x, y, z system has no solution")
        return None
    x12, x13, x23 = coords[(1, 2)], coords[(1, 3)], coords[(2, 3)]
    x24, x34 = coords[(2, 4)], coords[(3, 4)]
    x = (x12 * x13 + x12 * x24 + x23 * x24) / delta
    y = x13 / x24 * (1 + x)
    z = x12 / x23 * (1 + y)
    return XYZ(x, y, z)
