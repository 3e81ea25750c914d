"""The resolvent-degree bound table as a check."""

from typing import Dict, Optional, Sequence

from ..engine.engine import BoundEngine
from ..models.report import CheckReport, CheckStatus
from ..utils.errors import SoundnessError, UnderivableCellError

CHARACTERISTICS = (0, 2, 3, 5, 7)

EXPECTED_TABLE: Dict[str, tuple] = {
    'S6': (2, 2, 1, 2, 2),
    'S7': (3, 3, 2, 2, 2),
    'S8': (4, 3, 4, 4, 4),
    'W(E6)': (3, 2, 2, 2, 3),
}


def check_bound_table(expected: Optional[Dict[str, Sequence[int]]] = None, engine: Optional[BoundEngine] = None) -> CheckReport:
    """Derived table matches the expected rows and every trace replays."""
    expected = expected or EXPECTED_TABLE
    engine = engine or BoundEngine(characteristics=CHARACTERISTICS)
    engine.derive()
    params = {'groups': list(expected), 'characteristics': list(CHARACTERISTICS)}
    try:
        table = engine.table(list(expected), CHARACTERISTICS)
    except UnderivableCellError as exc:
        return CheckReport(
            check_id="intro.bound-table",
            status=CheckStatus.FAIL,
            params=params,
            message=exc.message,
            witness={'missing': [f"rd_{p}({g})" for g, p in exc.cells]},
        )

    mismatches = {
        g: {'derived': table.row(g), 'expected': list(row)}
        for g, row in expected.items()
        if table.row(g) != list(row)
    }
    try:
        replayed = engine.replay_all()
    except SoundnessError as exc:
        return CheckReport(
            check_id="intro.bound-table",
            status=CheckStatus.FAIL,
            params=params,
            message=f"trace replay failed: {exc.message}",
        )
    relation = engine.relate("S7", "S6", 5)
    stats = {
        'table': {g: table.row(g) for g in expected},
        'replayed_facts': replayed,
        'rounds': engine.rounds,
        'rd5_S7_vs_S6': relation.to_dict(),
    }
    if mismatches:
        return CheckReport(
            check_id="intro.bound-table",
            status=CheckStatus.FAIL,
            params=params,
            message=f"{len(mismatches)} rows differ from the expected table",
            witness={'rows': mismatches},
            stats=stats,
        )
    message = f"{len(expected) * len(CHARACTERISTICS)} cells match; {replayed} traces replay"
    if relation.equal:
        message += "; rd_5(S7) = rd_5(S6)"
    return CheckReport(
        check_id="intro.bound-table",
        status=CheckStatus.PASS,
        params=params,
        message=message,
        witness={'table': table.to_text()},
        stats=stats,
    )
