"""Tests for configuration loading and validation."""

from pathlib import Path

import pytest

from rdlab.core.config import BudgetConfig, LabConfig, LogLevel, ReportFormat, SamplingConfig, get_config, set_config
from rdlab.utils.errors import ConfigurationError

LAB_YAML = """
budgets:
  projective_points: 5000
  check_seconds: 30
sampling:
  seed: 7
  slice_trials: 3
engine:
  characteristics: [0, 3]
  table_groups: [S6, S7]
run:
  jobs: 2
  negative_controls: true
  format: plain
  output_dir: out
logging:
  level: debug
  structured: true
"""


def test_defaults():
    config = LabConfig(jobs=1)
    assert config.sampling.seed == 42
    assert config.budgets.projective_points == 200_000_000
    assert config.engine.characteristics == (0, 2, 3, 5, 7)
    assert config.engine.fact_base is None
    assert config.report_format is ReportFormat.STRUCTURED
    assert config.validate() == []


def test_from_yaml(tmp_path):
    path = tmp_path / "lab.yaml"
    path.write_text(LAB_YAML, encoding="utf-8")
    config = LabConfig.from_yaml(str(path))
    assert config.budgets.projective_points == 5000
    assert config.budgets.check_seconds == 30
    assert config.budgets.field_cardinality == 200_000
    assert config.sampling.seed == 7
    assert config.sampling.slice_trials == 3
    assert config.engine.characteristics == (0, 3)
    assert config.engine.table_groups == ("S6", "S7")
    assert config.jobs == 2
    assert config.negative_controls is True
    assert config.report_format is ReportFormat.PLAIN
    assert config.output_dir == Path("out")
    assert config.log_level is LogLevel.DEBUG
    assert config.structured_logging is True


def test_empty_yaml(tmp_path):
    path = tmp_path / "empty.yaml"
    path.write_text("", encoding="utf-8")
    assert LabConfig.from_yaml(str(path)).sampling.seed == 42


def test_from_env(monkeypatch):
    monkeypatch.setenv("RDLAB_SEED", "11")
    monkeypatch.setenv("RDLAB_JOBS", "3")
    monkeypatch.setenv("RDLAB_BUDGET_POINTS", "999")
    monkeypatch.setenv("RDLAB_BUDGET_SECS", "12.5")
    monkeypatch.setenv("RDLAB_FACT_BASE", "custom.facts")
    monkeypatch.setenv("LOG_LEVEL", "warning")
    config = LabConfig.from_env(LabConfig(jobs=1))
    assert config.sampling.seed == 11
    assert config.jobs == 3
    assert config.budgets.projective_points == 999
    assert config.budgets.check_seconds == 12.5
    assert config.engine.fact_base == Path("custom.facts")
    assert config.log_level is LogLevel.WARNING


def test_invalid_env_value_is_rejected(monkeypatch):
    monkeypatch.setenv("RDLAB_JOBS", "0")
    with pytest.raises(ConfigurationError) as exc:
        LabConfig.from_env(LabConfig(jobs=1))
    assert "Worker count must be at least 1" in exc.value.details['errors']


@pytest.mark.parametrize("kwargs", [
    {'jobs': 0},
    {'jobs': 1, 'sampling': SamplingConfig(seed=-1)},
    {'jobs': 1, 'budgets': BudgetConfig(projective_points=0)},
])
def test_invalid_construction(kwargs):
    with pytest.raises(ConfigurationError):
        LabConfig(**kwargs)


def test_validation_messages():
    config = LabConfig(jobs=1)
    config.sampling.tower_depth = 9
    config.engine.characteristics = (2, 3)
    config.budgets.check_seconds = 0
    errors = config.validate()
    assert len(errors) == 3


def test_with_overrides_copies():
    config = LabConfig(jobs=1)
    changed = config.with_overrides(seed=5, slice_trials=None)
    assert changed.sampling.seed == 5
    assert changed.sampling.slice_trials == config.sampling.slice_trials
    assert config.sampling.seed == 42


def test_active_config(lab_config):
    assert get_config() is lab_config
    other = LabConfig(jobs=1, heavy=True)
    set_config(other)
    assert get_config().heavy
