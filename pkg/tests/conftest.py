"""Shared fixtures."""

import pytest

from rdlab.core.config import BudgetConfig, LabConfig, SamplingConfig, get_config, set_config
from rdlab.engine.engine import BoundEngine
from rdlab.engine.facts import load_fact_base
from rdlab.utils.cache import memo


@pytest.fixture(autouse=True)
def lab_config():
    """Every test starts from a single-worker default configuration."""
    previous = get_config()
    config = LabConfig(jobs=1)
    set_config(config)
    yield config
    set_config(previous)


@pytest.fixture
def tight_budgets():
    """Budgets small enough to trip on toy inputs."""
    config = LabConfig(
        jobs=1,
        budgets=BudgetConfig(field_cardinality=64, projective_points=100, group_order=50),
    )
    set_config(config)
    return config


@pytest.fixture
def fresh_memo():
    """Drop memoized fields and groups so budget changes take effect."""
    memo().clear()
    yield memo()
    memo().clear()


@pytest.fixture
def quick_sampling():
    config = LabConfig(jobs=1, sampling=SamplingConfig(random_words=5, slice_trials=5, escalation_draws=5, sampled_points=10))
    set_config(config)
    return config


@pytest.fixture(scope="session")
def fact_base():
    return load_fact_base()


@pytest.fixture(scope="session")
def engine(fact_base):
    engine = BoundEngine(fact_base)
    engine.derive()
    return engine
