"""Configuration management for the lab."""

import os
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import List, Optional, Tuple

import yaml


class LogLevel(Enum):
    """Logging levels."""
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"


class ReportFormat(Enum):
    """Report output format."""
    STRUCTURED = "structured"
    PLAIN = "plain"


@dataclass
class BudgetConfig:
    """Resource budgets. Exceeding one raises BudgetExceededError."""
    field_cardinality: int = 200_000
    projective_points: int = 200_000_000
    # rows x columns of an evaluation matrix handed to exact elimination
    linear_algebra_entries: int = 250_000
    group_order: int = 1_000_000
    # Schreier-Sims domain limit; F_9^4 has 6560 nonzero vectors
    certify_degree: int = 8_192
    check_seconds: float = 600.0


@dataclass
class SamplingConfig:
    """Seeds and sample sizes for evidence-grade checks."""
    seed: int = 42
    random_words: int = 100
    word_length: int = 12
    slice_trials: int = 50
    tower_depth: int = 2
    escalation_draws: int = 60
    sampled_points: int = 50


@dataclass
class EngineConfig:
    """Inference engine configuration."""
    fact_base: Optional[Path] = None  # None selects the embedded default
    characteristics: Tuple[int, ...] = (0, 2, 3, 5, 7)
    table_groups: Tuple[str, ...] = ("S6", "S7", "S8", "W(E6)")


@dataclass
class LabConfig:
    """Complete lab configuration."""

    name: str = "rdlab"
    version: str = "1.0.0"

    budgets: BudgetConfig = field(default_factory=BudgetConfig)
    sampling: SamplingConfig = field(default_factory=SamplingConfig)
    engine: EngineConfig = field(default_factory=EngineConfig)

    # Execution
    jobs: int = field(default_factory=lambda: os.cpu_count() or 1)
    negative_controls: bool = False
    heavy: bool = False
    with_timings: bool = False

    # Logging
    log_level: LogLevel = LogLevel.INFO
    log_file: Optional[str] = None
    structured_logging: bool = False

    # Output
    output_dir: Path = field(default_factory=lambda: Path("reports"))
    report_format: ReportFormat = ReportFormat.STRUCTURED

    @classmethod
    def from_yaml(cls, filepath: str) -> "LabConfig":
        """Load configuration from YAML file."""
        with open(filepath, 'r') as f:
            data = yaml.safe_load(f) or {}

        config = cls()

        if 'budgets' in data:
            budget_data = data['budgets']
            b = config.budgets
            b.field_cardinality = budget_data.get('field_cardinality', b.field_cardinality)
            b.projective_points = budget_data.get('projective_points', b.projective_points)
            b.linear_algebra_entries = budget_data.get('linear_algebra_entries', b.linear_algebra_entries)
            b.group_order = budget_data.get('group_order', b.group_order)
            b.certify_degree = budget_data.get('certify_degree', b.certify_degree)
            b.check_seconds = budget_data.get('check_seconds', b.check_seconds)

        if 'sampling' in data:
            sampling_data = data['sampling']
            s = config.sampling
            s.seed = sampling_data.get('seed', s.seed)
            s.random_words = sampling_data.get('random_words', s.random_words)
            s.word_length = sampling_data.get('word_length', s.word_length)
            s.slice_trials = sampling_data.get('slice_trials', s.slice_trials)
            s.tower_depth = sampling_data.get('tower_depth', s.tower_depth)
            s.escalation_draws = sampling_data.get('escalation_draws', s.escalation_draws)
            s.sampled_points = sampling_data.get('sampled_points', s.sampled_points)

        if 'engine' in data:
            engine_data = data['engine']
            if fact_base := engine_data.get('fact_base'):
                config.engine.fact_base = Path(fact_base)
            if characteristics := engine_data.get('characteristics'):
                config.engine.characteristics = tuple(int(p) for p in characteristics)
            if table_groups := engine_data.get('table_groups'):
                config.engine.table_groups = tuple(str(g) for g in table_groups)

        if 'run' in data:
            run_data = data['run']
            config.jobs = run_data.get('jobs', config.jobs)
            config.negative_controls = run_data.get('negative_controls', config.negative_controls)
            config.heavy = run_data.get('heavy', config.heavy)
            config.with_timings = run_data.get('with_timings', config.with_timings)
            if output_dir := run_data.get('output_dir'):
                config.output_dir = Path(output_dir)
            if report_format := run_data.get('format'):
                config.report_format = ReportFormat(report_format)

        if 'logging' in data:
            logging_data = data['logging']
            if level := logging_data.get('level'):
                config.log_level = LogLevel(level.upper())
            config.log_file = logging_data.get('file', config.log_file)
            config.structured_logging = logging_data.get('structured', config.structured_logging)

        config.__post_init__()
        return config

    @classmethod
    def from_env(cls, base: Optional["LabConfig"] = None) -> "LabConfig":
        """Apply environment overrides on top of ``base`` (or the defaults)."""
        config = base if base is not None else cls()

        if seed := os.getenv("RDLAB_SEED"):
            config.sampling.seed = int(seed)

        if jobs := os.getenv("RDLAB_JOBS"):
            config.jobs = int(jobs)

        if points := os.getenv("RDLAB_BUDGET_POINTS"):
            config.budgets.projective_points = int(points)

        if seconds := os.getenv("RDLAB_BUDGET_SECS"):
            config.budgets.check_seconds = float(seconds)

        if fact_base := os.getenv("RDLAB_FACT_BASE"):
            config.engine.fact_base = Path(fact_base)

        if log_level := os.getenv("LOG_LEVEL"):
            config.log_level = LogLevel(log_level.upper())

        config.__post_init__()
        return config

    def validate(self) -> List[str]:
        """Validate configuration and return list of errors."""
        errors = []

        if self.budgets.field_cardinality < 2:
            errors.append("Field cardinality budget must be at least 2")

        if self.budgets.projective_points < 1:
            errors.append("Projective point budget must be positive")

        if self.budgets.check_seconds <= 0:
            errors.append("Per-check time budget must be positive")

        if self.sampling.seed < 0:
            errors.append("Seed must be non-negative")

        if self.sampling.slice_trials < 1:
            errors.append("At least one slice trial is required")

        if not 1 <= self.sampling.tower_depth <= 6:
            errors.append("Tower depth must be between 1 and 6")

        if self.jobs < 1:
            errors.append("Worker count must be at least 1")

        if 0 not in self.engine.characteristics:
            errors.append("Characteristic 0 must be part of the engine's characteristics")

        return errors

    def __post_init__(self):
        """Post-initialization validation."""
        errors = self.validate()
        if errors:
            from ..utils.errors import ConfigurationError
            error_msg = "Configuration validation failed:\n" + "\n".join(f"  - {err}" for err in errors)
            raise ConfigurationError(error_msg, details={'errors': errors})

    def with_overrides(self, **sampling_overrides) -> "LabConfig":
        """Copy with sampling fields replaced; ``None`` values are ignored."""
        values = {k: v for k, v in sampling_overrides.items() if v is not None}
        return replace(self, sampling=replace(self.sampling, **values))


_active = None


def get_config() -> LabConfig:
    """Return the process-wide active configuration."""
    global _active
    if _active is None:
        _active = LabConfig()
    return _active


def set_config(config: LabConfig) -> None:
    """Install ``config`` as the process-wide active configuration."""
    global _active
    _active = config
