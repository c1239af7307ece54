"""
Base verification suite with a bounded worker pool.
"""

import logging
import random
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, List, Optional

from ..dilog import DEFAULT_PRECISION_BITS, MIN_PRECISION_BITS, DilogEngine, get_engine
from ..identities import IdentityReport, IdentityResult, merge_reports
from ..utils.sampling import DEFAULT_COORD_MAX, trial_rng

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunConfig:
    """Settings for one CLI invocation, after flags have overridden the environment."""

    command: str = "verify"
    n: int = 4
    trials: int = 1
    seed: int = 0
    precision_bits: int = DEFAULT_PRECISION_BITS
    tol: Optional[Fraction] = None
    coord_max: int = DEFAULT_COORD_MAX
    output: Optional[str] = None
    suite: str = "all"
    threads: int = 4
    sabotage: bool = False

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"--n must be at least 2, got {self.n}")
        if self.trials < 1:
            raise ValueError(f"--trials must be at least 1, got {self.trials}")
        if self.precision_bits < MIN_PRECISION_BITS:
            raise ValueError(f"--precision-bits must be at least {MIN_PRECISION_BITS}, got {self.precision_bits}")
        if self.coord_max < 1:
            raise ValueError(f"--coord-max must be at least 1, got {self.coord_max}")
        if self.threads < 1:
            raise ValueError(f"TPDILOG_THREADS must be at least 1, got {self.threads}")
        if self.tol is not None and self.tol < 0:
            raise ValueError(f"--tol must be non-negative, got {self.tol}")


@dataclass(frozen=True)
class Trial:
    """Everything one trial needs; its generator is seeded with seed + index."""

    index: int
    seed: int
    n: int
    engine: DilogEngine
    tol: Optional[Fraction] = None
    coord_max: int = DEFAULT_COORD_MAX
    sabotage: bool = False
    rng: random.Random = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.rng is None:
            object.__setattr__(self, "rng", random.Random(self.seed))

    @property
    def is_first(self) -> bool:
        return self.index == 0

    def report(self, results: Iterable[IdentityResult]) -> IdentityReport:
        return IdentityReport(
            n=self.n, trials=1, seed=self.seed, precision_bits=self.engine.precision_bits, results=tuple(results)
        )


def combine_trial(reports: List[IdentityReport]) -> IdentityReport:
    """Merge several reports produced inside one trial, counting it once."""
    return replace(merge_reports(reports), trials=1)


class BaseSuite(ABC):
    """Base class for all verification suites."""

    name: str = ""
    min_n: int = 3
    max_n: Optional[int] = None

    def admits(self, n: int) -> bool:
        return n >= self.min_n and (self.max_n is None or n <= self.max_n)

    def can_handle(self, selector: str, n: int) -> bool:
        """Check if this suite answers to the selector and supports dimension n."""
        return selector in (self.name, "all") and self.admits(n)

    def describe_range(self) -> str:
        if self.max_n is None:
            return f"n >= {self.min_n}"
        if self.max_n == self.min_n:
            return f"n = {self.min_n}"
        return f"{self.min_n} <= n <= {self.max_n}"

    @abstractmethod
    def run_trial(self, trial: Trial) -> IdentityReport:
        """Run every check of the suite on one seeded trial."""
        pass

    def make_trials(self, config: RunConfig, engine: DilogEngine) -> List[Trial]:
        return [
            Trial(
                index=i,
                seed=config.seed + i,
                n=config.n,
                engine=engine,
                tol=config.tol,
                coord_max=config.coord_max,
                sabotage=config.sabotage,
                rng=trial_rng(config.seed, i),
            )
            for i in range(config.trials)
        ]

    def run(self, config: RunConfig) -> IdentityReport:
        """Fan trials out to the worker pool and merge their reports."""
        engine = get_engine(config.precision_bits)
        trials = self.make_trials(config, engine)
        workers = min(config.threads, len(trials))
        logger.info(f"Running suite '{self.name}' for n={config.n}: {len(trials)} trials on {workers} workers")

        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(self._run_logged, trials))

        report = merge_reports(reports)
        for failure in report.failures:
            logger.warning(f"Suite '{self.name}': identity '{failure.name}' failed")
        return report

    def _run_logged(self, trial: Trial) -> IdentityReport:
        try:
            report = self.run_trial(trial)
        except Exception as e:
            logger.error(f"Suite '{self.name}' trial {trial.index} (seed {trial.seed}) failed: {e}")
            raise
        logger.debug(f"Suite '{self.name}' trial {trial.index} done: pass={report.passed}")
        return report
