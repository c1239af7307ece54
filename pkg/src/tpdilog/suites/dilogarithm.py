"""
Suites for the dilogarithm identities, evaluated at the working precision.
"""

import logging

from ..core import jacobi_to_matrix
from ..identities import (
    IdentityReport,
    verify_b_version,
    verify_chain,
    verify_function,
    verify_s3_form,
    verify_script_l,
    verify_sum_constant,
)
from ..utils.sampling import (
    coords_with_zero_delta,
    random_b_matrix,
    random_coords,
    random_diagonal,
    random_rational,
)
from .base import BaseSuite, Trial, combine_trial

logger = logging.getLogger(__name__)


def _random_matrix(trial: Trial):
    return jacobi_to_matrix(random_coords(trial.n, trial.rng, trial.coord_max))


class ConstantSuite(BaseSuite):
    """Σ l(Y(M)) + Σ l(Y(M')) = n(n-1)(n-2)/6, and the termwise inversion per family."""

    name = "constant"

    def run_trial(self, trial: Trial) -> IdentityReport:
        return verify_sum_constant(_random_matrix(trial), trial.engine, trial.tol, trial.seed)


class ChainSuite(BaseSuite):
    """The twelve sums over M', 1/Y(M) and M''."""

    name = "chain"

    def run_trial(self, trial: Trial) -> IdentityReport:
        return verify_chain(_random_matrix(trial), trial.engine, trial.tol, corrupt=trial.sabotage, seed=trial.seed)


class S3FormSuite(BaseSuite):
    name = "s3"

    def run_trial(self, trial: Trial) -> IdentityReport:
        return verify_s3_form(_random_matrix(trial), engine=trial.engine, tol=trial.tol, seed=trial.seed)


class BGroupSuite(BaseSuite):
    """The chain on B_n^+ with Ǧ and Ĝ in place of M' and M''."""

    name = "bgroup"

    def run_trial(self, trial: Trial) -> IdentityReport:
        G = random_b_matrix(trial.n, trial.rng, trial.coord_max)
        return verify_b_version(G, trial.engine, trial.tol, trial.seed)


class ScriptLSuite(BaseSuite):
    """
    ℒ(Ǧ) = ℒ(Ĝ) = 4 - ℒ(G) on a random G, and on a G = MΛ with δ(M) = 0,
    where all three values are 2.
    """

    name = "script-l"
    min_n = 4
    max_n = 4

    def run_trial(self, trial: Trial) -> IdentityReport:
        generic = random_b_matrix(4, trial.rng, trial.coord_max)
        degenerate = jacobi_to_matrix(coords_with_zero_delta(trial.rng, trial.coord_max)) @ random_diagonal(
            4, trial.rng, trial.coord_max
        )
        return combine_trial([
            verify_script_l(generic, trial.engine, trial.tol, trial.seed),
            verify_script_l(degenerate, trial.engine, trial.tol, trial.seed),
        ])


class FunctionSuite(BaseSuite):
    """Symmetry and closed form of F(x, y, z), pentagon and inversion at a random point."""

    name = "function"
    min_n = 2

    def run_trial(self, trial: Trial) -> IdentityReport:
        x, y, z = (random_rational(trial.rng, trial.coord_max) for _ in range(3))
        logger.debug(f"F at ({x}, {y}, {z})")
        return trial.report(verify_function(x, y, z, trial.engine, trial.tol))
