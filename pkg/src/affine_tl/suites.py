"""
Suite runner for the verification harness.

This module loads the suite configuration, expands it into one run per
(suite, rank) pair and executes the runs either inline or on a bounded
process pool. Results are collected in submission order so that the
summary is the same whatever order the workers finish in.
"""

import json
import logging
import os
from concurrent.futures import Future, ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Dict, Iterable, List, Optional

from pydantic import ValidationError

from .errors import ConfigError
from .harness import SUITES, run_suite
from .models import SuiteSpec, SuitesConfig, VerificationReport

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = os.path.join(
    os.path.dirname(os.path.abspath(__file__)), "suites.json"
)


def _env_workers() -> int:
    raw = os.getenv("TL_WORKERS", "1")
    try:
        workers = int(raw)
    except ValueError:
        logger.warning(f"Ignoring TL_WORKERS={raw!r}: not an integer")
        return 1
    if workers < 1:
        logger.warning(f"Ignoring TL_WORKERS={workers}: must be at least 1")
        return 1
    return workers


DEFAULT_WORKERS = _env_workers()
CONFIG_PATH = os.getenv("TL_SUITES_CONFIG", DEFAULT_CONFIG_PATH)


class SuiteStatus(Enum):
    """Suite run status enumeration."""

    QUEUED = "queued"
    RUNNING = "running"
    PASSED = "passed"
    FAILED = "failed"
    ERROR = "error"


@dataclass
class SuiteRun:
    """One suite at one rank."""

    suite: str
    rank: int
    max_len: int
    samples: int = 0
    seed: int = 0
    status: SuiteStatus = SuiteStatus.QUEUED
    report: Optional[VerificationReport] = None
    created_at: datetime = field(default_factory=datetime.now)
    started_at: Optional[datetime] = None
    completed_at: Optional[datetime] = None
    error_message: Optional[str] = None

    @property
    def name(self) -> str:
        return f"{self.suite}[n={self.rank}]"

    @property
    def is_finished(self) -> bool:
        """Check if the run reached a final status."""
        return self.status not in (SuiteStatus.QUEUED, SuiteStatus.RUNNING)

    @property
    def duration_seconds(self) -> Optional[float]:
        """Get the run duration in seconds if finished."""
        if self.started_at and self.completed_at:
            return (self.completed_at - self.started_at).total_seconds()
        return None


def load_config(path: Optional[str] = None) -> SuitesConfig:
    """
    Load and validate a suite configuration file.

    Args:
        path: Configuration file; defaults to TL_SUITES_CONFIG or the
            bundled suites.json

    Returns:
        The validated configuration

    Raises:
        FileNotFoundError: If the file is missing
        ConfigError: If the file is not valid JSON, does not match the
            schema, or names an unknown suite
    """
    config_path = path or CONFIG_PATH
    if not os.path.exists(config_path):
        raise FileNotFoundError(f"Suite configuration not found at {config_path}")

    with open(config_path, "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"Invalid JSON in {config_path}: {e}") from e

    try:
        config = SuitesConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"Invalid suite configuration {config_path}: {e}") from e

    for spec in config.suites:
        if spec.name not in SUITES:
            raise ConfigError(f"Unknown suite {spec.name!r} in {config_path}")
    logger.info(f"Loaded {len(config.suites)} suite(s) from {config_path}")
    return config


def _execute(run: SuiteRun) -> VerificationReport:
    return run_suite(run.suite, run.rank, run.max_len, run.samples, run.seed)


class SuiteManager:
    """
    Expands suite specs into runs and executes them.

    With one worker the runs execute inline in the calling process;
    otherwise they are submitted to a ProcessPoolExecutor of that size.
    """

    def __init__(self, workers: Optional[int] = None) -> None:
        self.workers = workers if workers is not None else DEFAULT_WORKERS
        if self.workers < 1:
            raise ConfigError(f"Worker count must be at least 1, got {self.workers}")
        self._runs: List[SuiteRun] = []

    @property
    def runs(self) -> List[SuiteRun]:
        return list(self._runs)

    @property
    def failed_runs(self) -> List[SuiteRun]:
        """Runs that finished with failures or errors."""
        return [
            run
            for run in self._runs
            if run.status in (SuiteStatus.FAILED, SuiteStatus.ERROR)
        ]

    @property
    def all_passed(self) -> bool:
        """True when every run passed."""
        return bool(self._runs) and all(
            run.status is SuiteStatus.PASSED for run in self._runs
        )

    def plan(
        self,
        specs: Iterable[SuiteSpec],
        max_len: Optional[int] = None,
        only: Optional[List[str]] = None,
        ranks: Optional[List[int]] = None,
    ) -> List[SuiteRun]:
        """
        Queue one run per (suite, rank).

        Args:
            specs: Suite specifications
            max_len: Overrides every spec's length bound when given
            only: Restricts to these suite names; disabled specs named here
                are run too
            ranks: Replaces every spec's ranks when given

        Returns:
            The queued runs

        Raises:
            ConfigError: If a name in only matches no spec
        """
        specs = list(specs)
        if only:
            known = {spec.name for spec in specs}
            missing = [name for name in only if name not in known]
            if missing:
                raise ConfigError(f"No configured suite named {', '.join(missing)}")
        for spec in specs:
            selected = spec.name in only if only else spec.enabled
            if not selected:
                logger.debug(f"Skipping suite {spec.name}")
                continue
            for rank in ranks or spec.ranks:
                run = SuiteRun(
                    suite=spec.name,
                    rank=rank,
                    max_len=spec.max_len if max_len is None else max_len,
                    samples=spec.samples,
                    seed=spec.seed,
                )
                self._runs.append(run)
                logger.debug(f"Queued {run.name} (max_len={run.max_len})")
        return self.runs

    def _start(self, run: SuiteRun) -> None:
        run.status = SuiteStatus.RUNNING
        run.started_at = datetime.now()

    def _complete(
        self,
        run: SuiteRun,
        report: Optional[VerificationReport],
        error: Optional[BaseException] = None,
    ) -> None:
        run.completed_at = datetime.now()
        if error is not None:
            run.status = SuiteStatus.ERROR
            run.error_message = f"{type(error).__name__}: {error}"
            logger.error(f"{run.name} raised {run.error_message}")
            return
        run.report = report
        run.status = (
            SuiteStatus.PASSED
            if report is not None and report.passed
            else SuiteStatus.FAILED
        )
        logger.info(f"{run.name} {run.status.value} in {run.duration_seconds:.2f}s")

    def execute(self) -> List[SuiteRun]:
        """
        Run every queued run.

        Returns:
            The runs, in the order they were planned
        """
        queued = [run for run in self._runs if run.status is SuiteStatus.QUEUED]
        logger.info(f"Executing {len(queued)} run(s) with {self.workers} worker(s)")
        if self.workers == 1:
            for run in queued:
                self._start(run)
                try:
                    self._complete(run, _execute(run))
                except Exception as e:
                    self._complete(run, None, e)
            return self.runs

        futures: Dict[int, "Future[VerificationReport]"] = {}
        with ProcessPoolExecutor(max_workers=self.workers) as pool:
            for index, run in enumerate(queued):
                self._start(run)
                futures[index] = pool.submit(_execute, run)
            for index, run in enumerate(queued):
                try:
                    self._complete(run, futures[index].result())
                except Exception as e:
                    self._complete(run, None, e)
        return self.runs

    def reports(self) -> List[VerificationReport]:
        """Reports of the runs that completed, in planning order."""
        return [run.report for run in self._runs if run.report is not None]

    def summary(self) -> str:
        """Banner summary, one line per run."""
        lines = ["=" * 60, "VERIFICATION SUMMARY", "=" * 60]
        for run in self._runs:
            if run.status is SuiteStatus.ERROR:
                detail = run.error_message or ""
            elif run.report is not None:
                detail = f"{run.report.checked} checked, "
                detail += f"{len(run.report.failures)} failure(s)"
            else:
                detail = ""
            status = run.status.value.upper()
            lines.append(f"{run.name:.<40} {status} {detail}".rstrip())
        passed = sum(1 for run in self._runs if run.status is SuiteStatus.PASSED)
        lines.append("=" * 60)
        lines.append(f"{passed}/{len(self._runs)} run(s) passed")
        return "\n".join(lines)
