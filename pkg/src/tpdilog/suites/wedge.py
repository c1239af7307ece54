"""
Numerical surrogates for Σ X ∧ (1-X) = 0.
"""

import logging
from fractions import Fraction

from ..core import jacobi_to_matrix
from ..identities import IdentityReport, exact_check, numeric_result, tetrahedron_size
from ..utils.sampling import random_coords
from ..wedge import (
    DEFAULT_STEP,
    HALVING_STEP,
    TangentVector,
    WedgeKind,
    minor_form_failures,
    paired_sum,
    regulator_residual,
    step_halving,
    two_form_residual,
)
from ..yvars import YFamily
from .base import BaseSuite, Trial

logger = logging.getLogger(__name__)

RELATIVE_TOLERANCE = Fraction(1, 10 ** 8)
# a dropped family moves the regulator by O(1) relative to its terms
DETECTION_THRESHOLD = Fraction(1, 10 ** 4)


class WedgeSuite(BaseSuite):
    """Two-form and regulator checks per kind, the second-order convergence of the differences, and constancy of the paired sum."""

    name = "wedge"

    def run_trial(self, trial: Trial) -> IdentityReport:
        engine = trial.engine
        coords = random_coords(trial.n, trial.rng, trial.coord_max)
        u = TangentVector.random(trial.n, trial.rng)
        v = TangentVector.random(trial.n, trial.rng)
        relative_tol = engine.to_bigfloat(RELATIVE_TOLERANCE)
        results = []

        for kind in WedgeKind:
            two_form = two_form_residual(coords, u, v, kind, DEFAULT_STEP, engine=engine)
            results.append(numeric_result(f"two-form {kind.value}", two_form.relative, relative_tol))

            regulator = regulator_residual(coords, u, kind, DEFAULT_STEP, engine=engine)
            results.append(numeric_result(f"regulator {kind.value}", regulator.relative, relative_tol))

            partial = regulator_residual(coords, u, kind, DEFAULT_STEP, include_image=False, engine=engine)
            logger.debug(f"Regulator without the partner family ({kind.value}): {partial.relative}")
            results.append(exact_check(
                f"regulator detects a missing family {kind.value}",
                partial.relative > engine.to_bigfloat(DETECTION_THRESHOLD),
            ))

            if trial.is_first:
                halving = step_halving(coords, u, kind, HALVING_STEP, engine=engine)
                logger.debug(f"Step halving {kind.value}: rate {halving.rate}")
                results.append(exact_check(
                    f"difference step halving {kind.value}", halving.converges(engine.default_tolerance())
                ))

        M = jacobi_to_matrix(coords)
        results.append(exact_check("X and W minor forms", not minor_form_failures(M)))
        target = tetrahedron_size(trial.n)
        tol = engine.default_tolerance() if trial.tol is None else engine.to_bigfloat(trial.tol)
        for family in (YFamily.Y_LOWER, YFamily.Y_UPPER):
            deviation = abs(paired_sum(M, family, engine) - target)
            results.append(numeric_result(f"paired sum constant {family.value}", deviation, tol))
        return trial.report(results)
