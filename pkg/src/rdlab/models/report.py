"""Check report models."""

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np


class CheckStatus(Enum):
    """Outcome of one check."""
    PASS = "pass"                  # exact or exhaustive
    FAIL = "fail"                  # carries a counterexample witness
    EVIDENCE = "evidence"          # sampled or probabilistic
    INCONCLUSIVE = "inconclusive"  # escalation exhausted without a witness
    ERROR = "error"                # budget, timeout or construction failure


def jsonable(value: Any) -> Any:
    """Convert algebraic objects into plain JSON values."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return round(float(value), 6)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, np.ndarray):
        return np.asarray(value.view(np.ndarray)).tolist()
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [jsonable(v) for v in value]
        return sorted(items, key=json.dumps) if isinstance(value, (set, frozenset)) else items
    for attr in ("to_serial", "to_dict"):
        if hasattr(value, attr):
            return jsonable(getattr(value, attr)())
    if hasattr(value, "array_form"):
        return list(value.array_form)
    return str(value)


@dataclass
class CheckReport:
    """Result of a single check."""

    check_id: str
    status: CheckStatus
    params: Dict[str, Any] = field(default_factory=dict)
    anchor: str = ""
    message: str = ""
    witness: Dict[str, Any] = field(default_factory=dict)
    stats: Dict[str, Any] = field(default_factory=dict)
    seed: Optional[int] = None
    elapsed: Optional[float] = None
    negative_control: bool = False

    @property
    def ok(self) -> bool:
        """Whether the outcome is what the check expects.

        A negative control is expected to fail; any other check must not.
        """
        if self.negative_control:
            return self.status is CheckStatus.FAIL
        return self.status is not CheckStatus.FAIL

    def to_dict(self, with_timings: bool = False) -> Dict[str, Any]:
        data = {
            'id': self.check_id,
            'status': self.status.value,
            'params': jsonable(self.params),
            'anchor': self.anchor,
            'message': self.message,
            'witness': jsonable(self.witness),
            'stats': jsonable(self.stats),
            'seed': self.seed,
            'negative_control': self.negative_control,
        }
        if with_timings and self.elapsed is not None:
            data['elapsed'] = round(self.elapsed, 3)
        return data

    def to_json(self, with_timings: bool = False) -> str:
        return json.dumps(self.to_dict(with_timings), sort_keys=True, ensure_ascii=False)

    def to_markdown(self, with_timings: bool = False) -> str:
        md = f"""### {self.check_id}: {self.status.value.upper()}

**Claim:** {self.anchor}
**Parameters:** {json.dumps(jsonable(self.params), sort_keys=True)}
**Seed:** {self.seed}
"""
        if with_timings and self.elapsed is not None:
            md += f"**Elapsed:** {self.elapsed:.2f}s\n"
        if self.message:
            md += f"\n{self.message}\n"
        if self.stats:
            md += "\n**Statistics:**\n"
            for key, value in sorted(self.stats.items()):
                md += f"- {key}: {json.dumps(jsonable(value), sort_keys=True)}\n"
        if self.witness:
            md += "\n**Witness:**\n"
            for key, value in sorted(self.witness.items()):
                md += f"- {key}: {json.dumps(jsonable(value), sort_keys=True)}\n"
        return md

    def to_text(self) -> str:
        line = f"{self.check_id:<32} {self.status.value:<13} {self.message}"
        return line.rstrip()

    @classmethod
    def errored(cls, check_id: str, params: Dict[str, Any], exc: Exception, anchor: str = "", seed: Optional[int] = None) -> "CheckReport":
        details = getattr(exc, "details", {})
        return cls(
            check_id=check_id,
            status=CheckStatus.ERROR,
            params=params,
            anchor=anchor,
            message=f"{type(exc).__name__}: {getattr(exc, 'message', str(exc))}",
            witness={'details': details} if details else {},
            seed=seed,
        )


@dataclass
class RunSummary:
    """All reports of a run, in registry order."""

    reports: List[CheckReport] = field(default_factory=list)
    seed: Optional[int] = None
    elapsed: Optional[float] = None

    @property
    def counts(self) -> Dict[str, int]:
        counts = {status.value: 0 for status in CheckStatus}
        for report in self.reports:
            counts[report.status.value] += 1
        return counts

    @property
    def exit_code(self) -> int:
        """1 when any record failed, negative controls included."""
        return 1 if any(r.status is CheckStatus.FAIL for r in self.reports) else 0

    @property
    def unexpected(self) -> List[CheckReport]:
        return [r for r in self.reports if not r.ok and r.status is not CheckStatus.ERROR]

    def to_jsonl(self, with_timings: bool = False) -> str:
        return "".join(r.to_json(with_timings) + "\n" for r in self.reports)

    def to_markdown(self, with_timings: bool = False) -> str:
        md = "# Verification report\n\n"
        md += f"**Seed:** {self.seed}\n"
        md += "**Outcomes:** " + ", ".join(f"{k}={v}" for k, v in self.counts.items()) + "\n\n---\n\n"
        md += "\n".join(r.to_markdown(with_timings) for r in self.reports)
        return md

    def save(self, filepath: Path, report_format: str = "structured", with_timings: bool = False) -> Path:
        """Write the reports; structured output is JSON lines."""
        filepath = Path(filepath)
        filepath.parent.mkdir(parents=True, exist_ok=True)
        if report_format == "structured":
            content = self.to_jsonl(with_timings)
        else:
            content = self.to_markdown(with_timings)
        with open(filepath, 'w', encoding='utf-8') as f:
            f.write(content)
        return filepath
