"""Laboratory: selects checks, runs them and collects reports in registry order."""

import time
from concurrent.futures import ProcessPoolExecutor
from concurrent.futures import TimeoutError as FuturesTimeout
from concurrent.futures.process import BrokenProcessPool
from pathlib import Path
from typing import Any, Dict, List, Optional

from ..checks.registry import CheckRecord, CheckRegistry, build_registry, run_check
from ..engine.engine import BoundEngine
from ..engine.facts import load_fact_base
from ..models.report import CheckReport, RunSummary
from ..utils.errors import CheckTimeoutError, LabError
from ..utils.logging import configure_logging, get_logger
from ..utils.validators import sanitize_filename
from .config import LabConfig, get_config, set_config

logger = get_logger(__name__)


def _init_worker(config: LabConfig) -> None:
    set_config(config)
    configure_logging(level=config.log_level.value, log_file=config.log_file, structured=config.structured_logging)


class Laboratory:
    """
    Runs registered checks.

    With one job checks run inline and the per-check time budget is not
    enforced. With more jobs they go to a process pool and a check that does
    not report within ``budgets.check_seconds`` of collection is recorded as
    an error.
    """

    def __init__(self, config: Optional[LabConfig] = None):
        self.config = config or get_config()
        self.registry: CheckRegistry = build_registry(self.config)
        logger.debug(f"Laboratory ready with {len(self.registry)} registered checks")

    def select(self, selector: str = "*") -> List[CheckRecord]:
        return self.registry.select(selector, self.config.negative_controls, self.config.heavy)

    def run(
        self,
        records: List[CheckRecord],
        overrides: Optional[Dict[str, Any]] = None,
        seed: Optional[int] = None,
    ) -> RunSummary:
        """Run ``records`` and return their reports in the given order."""
        seed = seed if seed is not None else self.config.sampling.seed
        start = time.time()
        jobs = min(self.config.jobs, max(1, len(records)))
        logger.info(f"Running {len(records)} checks with {jobs} worker(s), seed {seed}")

        if jobs == 1:
            reports = [run_check(r, overrides, seed) for r in records]
        else:
            reports = self._run_pool(records, overrides, seed, jobs)

        summary = RunSummary(reports=reports, seed=seed, elapsed=time.time() - start)
        logger.info(
            "Run finished",
            counts=summary.counts,
            elapsed=round(summary.elapsed, 2),
        )
        return summary

    def _run_pool(self, records, overrides, seed, jobs) -> List[CheckReport]:
        budget = self.config.budgets.check_seconds
        pool = ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(self.config,))
        timed_out = False
        reports: List[CheckReport] = []
        try:
            futures = [pool.submit(run_check, r, overrides, seed) for r in records]
            for record, future in zip(records, futures):
                params = record.effective_params(overrides, seed)
                try:
                    reports.append(future.result(timeout=budget))
                except FuturesTimeout:
                    timed_out = True
                    future.cancel()
                    exc = CheckTimeoutError(
                        f"no report within {budget:.0f}s",
                        operation=record.check_id,
                        timeout_seconds=budget,
                    )
                    logger.error(f"{record.check_id} timed out after {budget:.0f}s")
                    reports.append(CheckReport.errored(record.check_id, params, exc, record.anchor, params.get("seed")))
                except BrokenProcessPool as exc:
                    logger.error(f"Worker died while running {record.check_id}")
                    reports.append(CheckReport.errored(record.check_id, params, LabError(str(exc)), record.anchor, params.get("seed")))
                reports[-1].negative_control = record.negative_control
        finally:
            pool.shutdown(wait=not timed_out, cancel_futures=True)
        return reports

    def verify_all(self, selector: str = "*", overrides: Optional[Dict[str, Any]] = None) -> RunSummary:
        return self.run(self.select(selector), overrides)

    def check(self, check_id: str, overrides: Optional[Dict[str, Any]] = None) -> RunSummary:
        """Run every default record of one id, or the first one with ``overrides`` applied."""
        records = [r for r in self.registry.get(check_id) if self.config.heavy or not r.heavy]
        records = records or self.registry.get(check_id)
        if overrides and any(v is not None for v in overrides.values()):
            records = records[:1]
        return self.run(records, overrides)

    def engine(self) -> BoundEngine:
        fact_base = load_fact_base(self.config.engine.fact_base, self.registry.ids(True, True))
        return BoundEngine(fact_base, self.config.engine.characteristics)

    def save(self, summary: RunSummary, out: Optional[Path] = None) -> Path:
        """Write the run's reports; defaults to ``output_dir/report.<ext>``."""
        structured = self.config.report_format.value == "structured"
        if out is None:
            name = sanitize_filename(f"report-seed-{summary.seed}") + (".jsonl" if structured else ".md")
            out = self.config.output_dir / name
        path = summary.save(out, self.config.report_format.value, self.config.with_timings)
        logger.info(f"Report saved to {path}")
        return path
