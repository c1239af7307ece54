"""
Verification suite factory.
Selects the suites a selector names and that support the requested n.
"""

import logging
from typing import List

from ..core import InvalidIndexError
from .base import BaseSuite, RunConfig, Trial, combine_trial
from .dilogarithm import BGroupSuite, ChainSuite, ConstantSuite, FunctionSuite, S3FormSuite, ScriptLSuite
from .exact import ExactSuite, MrhoSuite, TetraSuite
from .wedge import WedgeSuite

logger = logging.getLogger(__name__)


class SuiteFactory:
    """Factory for the verification suites."""

    def __init__(self):
        # Order matters: reports and logs follow it
        self.suite_classes = [
            ConstantSuite,
            ChainSuite,
            S3FormSuite,
            BGroupSuite,
            ScriptLSuite,
            FunctionSuite,
            TetraSuite,
            MrhoSuite,
            ExactSuite,
            WedgeSuite,
        ]

    @property
    def selectors(self) -> List[str]:
        return [cls.name for cls in self.suite_classes] + ["all"]

    def get_suites(self, selector: str, n: int) -> List[BaseSuite]:
        """
        Suites for the selector in fixed order. "all" silently narrows to the
        suites that admit n; a named suite that does not admit n is an error.
        """
        if selector not in self.selectors:
            raise ValueError(f"unknown suite '{selector}' (choose from {', '.join(self.selectors)})")

        chosen = []
        for suite_class in self.suite_classes:
            suite = suite_class()
            if suite.can_handle(selector, n):
                chosen.append(suite)
            elif selector == "all":
                logger.warning(f"Skipping suite '{suite.name}': needs {suite.describe_range()}, got n={n}")
            elif selector == suite.name:
                raise InvalidIndexError(f"suite '{suite.name}' needs {suite.describe_range()}, got n={n}")

        logger.info(f"Selected suites: {', '.join(s.name for s in chosen)}")
        return chosen


__all__ = [
    'SuiteFactory',
    'BaseSuite',
    'RunConfig',
    'Trial',
    'combine_trial',
    'ConstantSuite',
    'ChainSuite',
    'S3FormSuite',
    'BGroupSuite',
    'ScriptLSuite',
    'FunctionSuite',
    'TetraSuite',
    'MrhoSuite',
    'ExactSuite',
    'WedgeSuite',
]
