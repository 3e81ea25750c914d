"""Tests for the check-scoped logging context."""

import pytest
from loguru import logger

from rdlab.checks.registry import CheckRegistry, run_check
from rdlab.models.report import CheckReport, CheckStatus
from rdlab.utils.logging import check_context, get_logger

module_logger = get_logger("tests.logging")


@pytest.fixture
def captured():
    extras = []
    sink = logger.add(lambda message: extras.append(dict(message.record["extra"])), level="DEBUG")
    yield extras
    logger.remove(sink)


def _noisy(n: int, seed: int = 0) -> CheckReport:
    module_logger.debug("working", n=n)
    return CheckReport("toy.noisy", CheckStatus.PASS, params={'n': n})


def test_context_is_read_when_the_record_is_emitted(captured):
    with check_context("lem5.1d.cone-closure", 7):
        module_logger.info("inside")
    module_logger.info("outside")
    inside, outside = captured
    assert inside['check_id'] == "lem5.1d.cone-closure"
    assert inside['seed'] == 7
    assert inside['module'] == "tests.logging"
    assert outside['check_id'] is None
    assert outside['seed'] is None


def test_nested_contexts_restore_the_outer_one(captured):
    with check_context("outer", 1):
        with check_context("inner", 2):
            module_logger.info("inner")
        module_logger.info("outer")
    assert [e['check_id'] for e in captured] == ["inner", "outer"]
    assert [e['seed'] for e in captured] == [2, 1]


def test_run_check_tags_the_runner_logs(captured):
    record = CheckRegistry().add("toy.noisy", _noisy, "claim", n=3)
    run_check(record, seed=11)
    worker = [e for e in captured if e.get('module') == "tests.logging"]
    assert worker and all(e['check_id'] == "toy.noisy" and e['seed'] == 11 for e in worker)
    registry_lines = [e for e in captured if e.get('module') == "rdlab.checks.registry"]
    assert registry_lines and all(e['check_id'] == "toy.noisy" for e in registry_lines)
    module_logger.info("after")
    assert captured[-1]['check_id'] is None
