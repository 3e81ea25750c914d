"""Command-line front end for the lab.

Usage:
    rdlab verify-all --seed 42 --out reports/run.jsonl
    rdlab check lem5.1d.cone-closure --n 7 --q 7
    rdlab table
    rdlab explain S7 3
"""

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Optional

import typer
from dotenv import load_dotenv
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from ..core.config import LabConfig, LogLevel, ReportFormat, set_config
from ..core.lab import Laboratory
from ..models.report import CheckStatus, RunSummary
from ..utils.errors import (
    AbsentFactError,
    ConfigurationError,
    EngineError,
    LabError,
    UnderivableCellError,
    UnknownCheckError,
    ValidationError,
)
from ..utils.logging import configure_logging, get_logger
from ..utils.validators import validate_check_selector

app = typer.Typer(
    name="rdlab",
    help="Exact-arithmetic verification lab for resolvent-degree bounds.",
    no_args_is_help=True,
    add_completion=False,
)
console = Console()
logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

STATUS_STYLES = {
    CheckStatus.PASS: "green",
    CheckStatus.EVIDENCE: "cyan",
    CheckStatus.INCONCLUSIVE: "yellow",
    CheckStatus.FAIL: "bold red",
    CheckStatus.ERROR: "magenta",
}


@dataclass
class RunConfig:
    """One invocation: lab configuration plus what to run and where to write it."""

    lab: LabConfig
    selector: str = "*"
    overrides: Dict[str, Any] = field(default_factory=dict)
    out: Optional[Path] = None

    @property
    def report_format(self) -> ReportFormat:
        return self.lab.report_format

    @classmethod
    def build(
        cls,
        config_file: Optional[Path] = None,
        selector: str = "*",
        overrides: Optional[Dict[str, Any]] = None,
        seed: Optional[int] = None,
        budget_points: Optional[int] = None,
        budget_secs: Optional[float] = None,
        trials: Optional[int] = None,
        tower_depth: Optional[int] = None,
        report_format: Optional[str] = None,
        out: Optional[Path] = None,
        jobs: Optional[int] = None,
        log_level: Optional[str] = None,
        negative_controls: bool = False,
        heavy: bool = False,
        with_timings: bool = False,
        fact_base: Optional[Path] = None,
    ) -> "RunConfig":
        """Layer defaults, the YAML file, the environment and the flags, in that order."""
        base = LabConfig.from_yaml(str(config_file)) if config_file else LabConfig()
        lab = LabConfig.from_env(base)
        lab = lab.with_overrides(seed=seed, slice_trials=trials, tower_depth=tower_depth)

        budgets = {'projective_points': budget_points, 'check_seconds': budget_secs}
        budgets = {k: v for k, v in budgets.items() if v is not None}
        if budgets:
            lab = replace(lab, budgets=replace(lab.budgets, **budgets))
        if fact_base is not None:
            lab = replace(lab, engine=replace(lab.engine, fact_base=fact_base))

        changes: Dict[str, Any] = {}
        if jobs is not None:
            changes['jobs'] = jobs
        if report_format is not None:
            try:
                changes['report_format'] = ReportFormat(report_format)
            except ValueError:
                raise ValidationError(f"Unknown report format: {report_format}", field="format", value=report_format)
        if log_level is not None:
            try:
                changes['log_level'] = LogLevel(log_level.upper())
            except ValueError:
                raise ValidationError(f"Unknown log level: {log_level}", field="log_level", value=log_level)
        changes['negative_controls'] = negative_controls or lab.negative_controls
        changes['heavy'] = heavy or lab.heavy
        changes['with_timings'] = with_timings or lab.with_timings
        lab = replace(lab, **changes)

        return cls(lab=lab, selector=validate_check_selector(selector), overrides=dict(overrides or {}), out=out)

    def activate(self) -> Laboratory:
        set_config(self.lab)
        configure_logging(
            level=self.lab.log_level.value,
            log_file=self.lab.log_file,
            structured=self.lab.structured_logging,
        )
        return Laboratory(self.lab)


def _fail_usage(exc: LabError) -> None:
    console.print(f"[bold red]Error:[/bold red] {escape(exc.message)}")
    for key, value in exc.details.items():
        console.print(f"  {key}: {escape(str(value))}")
    raise typer.Exit(code=EXIT_USAGE)


def _print_summary(summary: RunSummary) -> None:
    table = Table(title=f"Checks (seed {summary.seed})")
    table.add_column("Check", style="cyan")
    table.add_column("Params")
    table.add_column("Status")
    table.add_column("Message")
    for report in summary.reports:
        shown = {k: v for k, v in report.params.items() if k != "seed"}
        style = STATUS_STYLES[report.status]
        status = report.status.value + (" (control)" if report.negative_control else "")
        table.add_row(report.check_id, escape(json.dumps(shown, default=str)), f"[{style}]{status}[/{style}]", escape(report.message))
    console.print(table)
    counts = ", ".join(f"{k}={v}" for k, v in summary.counts.items() if v)
    console.print(f"Outcomes: {counts}")
    if summary.unexpected:
        ids = ", ".join(r.check_id for r in summary.unexpected)
        console.print(f"[bold red]Unexpected outcomes:[/bold red] {escape(ids)}")


@app.callback()
def _load_environment():
    """Read a .env file before any command builds its configuration."""
    load_dotenv()


ConfigOption = typer.Option(None, "--config", help="YAML configuration file", exists=True, dir_okay=False)
SeedOption = typer.Option(None, "--seed", help="Sampling seed")
FormatOption = typer.Option(None, "--format", help="Report format: structured or plain")
OutOption = typer.Option(None, "--out", help="Report file")
JobsOption = typer.Option(None, "--jobs", help="Worker processes")
LogLevelOption = typer.Option(None, "--log-level", help="DEBUG, INFO, WARNING or ERROR")
FactBaseOption = typer.Option(None, "--fact-base", help="Fact base file replacing the embedded default")


@app.command("verify-all")
def verify_all(
    select: str = typer.Option("*", "--select", help="Check id or glob"),
    seed: Optional[int] = SeedOption,
    budget_points: Optional[int] = typer.Option(None, "--budget-points", help="Projective point budget"),
    budget_secs: Optional[float] = typer.Option(None, "--budget-secs", help="Per-check time budget"),
    trials: Optional[int] = typer.Option(None, "--trials", help="Random slices per tower level"),
    tower_depth: Optional[int] = typer.Option(None, "--tower-depth", help="Extension levels for slice counts"),
    report_format: Optional[str] = FormatOption,
    out: Optional[Path] = OutOption,
    jobs: Optional[int] = JobsOption,
    negative_controls: bool = typer.Option(False, "--negative-controls", help="Also run negative controls"),
    heavy: bool = typer.Option(False, "--heavy", help="Include heavy parameter sets"),
    with_timings: bool = typer.Option(False, "--with-timings", help="Record elapsed times in the report"),
    config_file: Optional[Path] = ConfigOption,
    log_level: Optional[str] = LogLevelOption,
):
    """Run every registered check and write a report."""
    try:
        run = RunConfig.build(
            config_file=config_file, selector=select, seed=seed,
            budget_points=budget_points, budget_secs=budget_secs,
            trials=trials, tower_depth=tower_depth, report_format=report_format,
            out=out, jobs=jobs, log_level=log_level,
            negative_controls=negative_controls, heavy=heavy, with_timings=with_timings,
        )
        lab = run.activate()
        records = lab.select(run.selector)
        if not records:
            raise UnknownCheckError(f"No check matches {run.selector!r}", check_id=run.selector)
        summary = lab.run(records, run.overrides)
    except (ConfigurationError, ValidationError, UnknownCheckError) as exc:
        _fail_usage(exc)

    _print_summary(summary)
    path = lab.save(summary, run.out)
    console.print(f"Report written to [bold]{path}[/bold]")
    raise typer.Exit(code=summary.exit_code)


@app.command("check")
def check(
    check_id: str = typer.Argument(..., help="Registered check id"),
    n: Optional[int] = typer.Option(None, "--n"),
    q: Optional[int] = typer.Option(None, "--q"),
    p: Optional[int] = typer.Option(None, "--p"),
    m: Optional[int] = typer.Option(None, "--m"),
    seed: Optional[int] = SeedOption,
    budget_points: Optional[int] = typer.Option(None, "--budget-points"),
    budget_secs: Optional[float] = typer.Option(None, "--budget-secs"),
    trials: Optional[int] = typer.Option(None, "--trials"),
    tower_depth: Optional[int] = typer.Option(None, "--tower-depth"),
    report_format: Optional[str] = FormatOption,
    out: Optional[Path] = OutOption,
    heavy: bool = typer.Option(False, "--heavy"),
    with_timings: bool = typer.Option(False, "--with-timings"),
    config_file: Optional[Path] = ConfigOption,
    log_level: Optional[str] = LogLevelOption,
):
    """Run one check, optionally with its parameters replaced."""
    try:
        run = RunConfig.build(
            config_file=config_file, selector=check_id,
            overrides={'n': n, 'q': q, 'p': p, 'm': m, 'trials': trials, 'tower_depth': tower_depth},
            seed=seed, budget_points=budget_points, budget_secs=budget_secs,
            trials=trials, tower_depth=tower_depth, report_format=report_format,
            out=out, jobs=1, log_level=log_level, heavy=heavy, with_timings=with_timings,
        )
        lab = run.activate()
        summary = lab.check(check_id, run.overrides)
    except (ConfigurationError, ValidationError, UnknownCheckError) as exc:
        _fail_usage(exc)

    for report in summary.reports:
        style = STATUS_STYLES[report.status]
        console.print(f"[{style}]{escape(report.to_text())}[/{style}]")
        if report.witness:
            console.print_json(json.dumps(report.to_dict()['witness']))
        if report.stats:
            console.print_json(json.dumps(report.to_dict()['stats']))
    if run.out is not None:
        lab.save(summary, run.out)
        console.print(f"Report written to [bold]{run.out}[/bold]")
    raise typer.Exit(code=summary.exit_code)


@app.command("table")
def table(
    report_format: Optional[str] = FormatOption,
    out: Optional[Path] = OutOption,
    fact_base: Optional[Path] = FactBaseOption,
    config_file: Optional[Path] = ConfigOption,
    log_level: Optional[str] = LogLevelOption,
):
    """Derive and print the resolvent-degree bound table."""
    try:
        run = RunConfig.build(
            config_file=config_file, report_format=report_format, out=out,
            jobs=1, log_level=log_level, fact_base=fact_base,
        )
        engine = run.activate().engine()
        bounds = engine.table(run.lab.engine.table_groups, run.lab.engine.characteristics)
    except UnderivableCellError as exc:
        console.print(f"[bold red]Underivable:[/bold red] {escape(exc.message)}")
        raise typer.Exit(code=EXIT_USAGE)
    except (ConfigurationError, ValidationError, EngineError) as exc:
        _fail_usage(exc)

    if run.report_format is ReportFormat.STRUCTURED:
        text = "".join(json.dumps(r, sort_keys=True) + "\n" for r in bounds.to_records())
        typer.echo(text, nl=False)
    else:
        text = bounds.to_text() + "\n"
        grid = Table(title="Upper bounds on rd_p(G)")
        grid.add_column("G", style="cyan")
        for p in bounds.characteristics:
            grid.add_column(f"p={p}", justify="right")
        for g in bounds.groups:
            grid.add_row(g, *("-" if v is None else str(v) for v in bounds.row(g)))
        console.print(grid)
    if run.out is not None:
        run.out.parent.mkdir(parents=True, exist_ok=True)
        run.out.write_text(text, encoding="utf-8")


@app.command("explain")
def explain(
    group: str = typer.Argument(..., help="Group name, e.g. S7, W(E6), SU(4,2)"),
    p: int = typer.Argument(..., help="Characteristic, 0 or a prime"),
    report_format: Optional[str] = FormatOption,
    fact_base: Optional[Path] = FactBaseOption,
    config_file: Optional[Path] = ConfigOption,
    log_level: Optional[str] = LogLevelOption,
):
    """Print the derivation tree behind the best bound on rd_p(group)."""
    try:
        run = RunConfig.build(
            config_file=config_file, report_format=report_format,
            jobs=1, log_level=log_level, fact_base=fact_base,
        )
        engine = run.activate().engine()
        trace = engine.explain(group, p)
    except AbsentFactError as exc:
        console.print(f"[bold red]No bound derived:[/bold red] {escape(exc.message)}")
        raise typer.Exit(code=EXIT_FAIL)
    except (ConfigurationError, ValidationError, EngineError) as exc:
        _fail_usage(exc)

    if run.report_format is ReportFormat.STRUCTURED:
        typer.echo(json.dumps(trace.to_dict(), sort_keys=True))
    else:
        typer.echo(trace.render())


@app.command("relate")
def relate(
    g: str = typer.Argument(...),
    h: str = typer.Argument(...),
    p: int = typer.Argument(...),
    fact_base: Optional[Path] = FactBaseOption,
    config_file: Optional[Path] = ConfigOption,
    log_level: Optional[str] = LogLevelOption,
):
    """Search for rd_p(g) <= rd_p(h) and the reverse inequality."""
    try:
        run = RunConfig.build(config_file=config_file, jobs=1, log_level=log_level, fact_base=fact_base)
        relation = run.activate().engine().relate(g, h, p)
    except (ConfigurationError, ValidationError, EngineError) as exc:
        _fail_usage(exc)

    typer.echo(relation.render())
    raise typer.Exit(code=EXIT_OK if relation.forward is not None or relation.backward is not None else EXIT_FAIL)


@app.command("list")
def list_checks(
    negative_controls: bool = typer.Option(False, "--negative-controls"),
    heavy: bool = typer.Option(False, "--heavy"),
    config_file: Optional[Path] = ConfigOption,
):
    """List registered checks with their default parameters."""
    try:
        run = RunConfig.build(
            config_file=config_file, jobs=1, log_level="WARNING",
            negative_controls=negative_controls, heavy=heavy,
        )
        lab = run.activate()
    except (ConfigurationError, ValidationError) as exc:
        _fail_usage(exc)

    grid = Table(title=f"{len(lab.registry)} registered checks")
    grid.add_column("Check", style="cyan")
    grid.add_column("Params")
    grid.add_column("Claim")
    for record in lab.select("*"):
        shown = {k: v for k, v in record.params.items() if k != "seed"}
        flags = " [heavy]" if record.heavy else ""
        grid.add_row(record.check_id + escape(flags), escape(json.dumps(shown, default=str)), escape(record.anchor))
    console.print(grid)


def main():
    app()


if __name__ == "__main__":
    main()
