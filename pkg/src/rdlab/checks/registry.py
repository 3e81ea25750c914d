"""Check registry: stable ids, default parameter sets and the run wrapper."""

import fnmatch
import inspect
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple, Type

from ..core.config import LabConfig, get_config
from ..models.report import CheckReport
from ..utils.errors import LabError, UnknownCheckError
from ..utils.logging import check_context, get_logger
from ..utils.validators import validate_check_selector
from . import bounds, cone, geometry, groups, invariance, smoothness

logger = get_logger(__name__)


@dataclass(frozen=True)
class CheckRecord:
    """One registered check with a default parameter set."""

    check_id: str
    runner: Callable[..., CheckReport]
    params: Dict[str, Any] = field(default_factory=dict)
    anchor: str = ""
    negative_control: bool = False
    heavy: bool = False

    @property
    def accepted(self) -> Tuple[str, ...]:
        return tuple(inspect.signature(self.runner).parameters)

    @property
    def seeded(self) -> bool:
        return "seed" in self.accepted

    def effective_params(self, overrides: Optional[Dict[str, Any]] = None, seed: Optional[int] = None) -> Dict[str, Any]:
        """Defaults merged with the overrides this runner accepts."""
        params = dict(self.params)
        accepted = self.accepted
        for key, value in (overrides or {}).items():
            if value is None:
                continue
            if key in accepted:
                params[key] = value
            else:
                logger.debug(f"{self.check_id} ignores override {key}={value}")
        if self.seeded:
            params["seed"] = seed if seed is not None else params.get("seed", get_config().sampling.seed)
        return params

    def label(self) -> str:
        shown = {k: v for k, v in self.params.items() if k != "seed"}
        return f"{self.check_id} {shown}" if shown else self.check_id


class CheckRegistry:
    """Ordered collection of check records."""

    def __init__(self):
        self._records: List[CheckRecord] = []

    def add(self, check_id: str, runner: Callable[..., CheckReport], anchor: str = "", **params) -> CheckRecord:
        negative = check_id.endswith(".negative")
        heavy = params.pop("heavy", False)
        record = CheckRecord(check_id, runner, params, anchor, negative_control=negative, heavy=heavy)
        self._records.append(record)
        return record

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self):
        return iter(self._records)

    def ids(self, include_negative: bool = False, include_heavy: bool = False) -> List[str]:
        seen: List[str] = []
        for r in self.select("*", include_negative, include_heavy):
            if r.check_id not in seen:
                seen.append(r.check_id)
        return seen

    def select(self, pattern: str = "*", include_negative: bool = False, include_heavy: bool = False) -> List[CheckRecord]:
        """Records whose id matches ``pattern``.

        An exact id selects its negative controls too; heavy variants still
        need ``include_heavy``.
        """
        pattern = validate_check_selector(pattern)
        exact = any(r.check_id == pattern for r in self._records)
        selected = []
        for r in self._records:
            if not fnmatch.fnmatchcase(r.check_id, pattern):
                continue
            if r.negative_control and not (include_negative or exact):
                continue
            if r.heavy and not include_heavy:
                continue
            selected.append(r)
        return selected

    def get(self, check_id: str) -> List[CheckRecord]:
        records = [r for r in self._records if r.check_id == check_id]
        if not records:
            raise UnknownCheckError(f"No check registered as {check_id!r}", check_id=check_id)
        return records


def run_check(
    record: CheckRecord,
    overrides: Optional[Dict[str, Any]] = None,
    seed: Optional[int] = None,
    propagate: Tuple[Type[Exception], ...] = (),
) -> CheckReport:
    """Run one record; lab errors become ERROR reports unless listed in ``propagate``."""
    params = record.effective_params(overrides, seed)
    with check_context(record.check_id, params.get("seed")):
        logger.info(f"Running {record.check_id}", params=params)
        start = time.perf_counter()
        try:
            report = record.runner(**params)
        except propagate:
            raise
        except LabError as exc:
            logger.error(f"{record.check_id} errored: {exc.message}")
            report = CheckReport.errored(record.check_id, params, exc, record.anchor, params.get("seed"))
        report.elapsed = time.perf_counter() - start
        report.anchor = record.anchor
        report.negative_control = record.negative_control
        report.params = {**params, **report.params}
        if "seed" in params:
            report.seed = params["seed"]
        logger.info(f"{record.check_id}: {report.status.value}", elapsed=round(report.elapsed, 3))
    return report


def build_registry(config: Optional[LabConfig] = None) -> CheckRegistry:
    """The full registry in report order."""
    config = config or get_config()
    words = config.sampling.random_words
    trials = config.sampling.slice_trials
    depth = config.sampling.tower_depth
    registry = CheckRegistry()
    add = registry.add

    for m, q in ((1, 2), (1, 3), (2, 2), (2, 3)):
        add("prop3.1a.sympl-invariance", invariance.check_symplectic_invariance,
            "ω(x, x^q) is invariant under Sp_2m(q)", m=m, q=q, extra_random_words=words)
    add("prop3.1a.sympl-invariance.negative", invariance.symplectic_invariance_control,
        "a non-symplectic diagonal matrix moves ω(x, x^q)", m=2, q=3)

    for n, q in ((3, 2), (3, 3), (4, 2), (4, 3)):
        add("prop3.1b.unit-invariance", invariance.check_unitary_invariance,
            "h(x, x) is invariant under U_n(q)", n=n, q=q, extra_random_words=words)
    add("prop3.1b.unit-invariance.negative", invariance.unitary_invariance_control,
        "a non-unitary diagonal matrix moves h(x, x)", n=3, q=3)
    for n, q in ((2, 2), (3, 2)):
        add("prop3.1b.min-vanish", invariance.min_vanishing_degree,
            "the least degree of a form vanishing on P^{n-1}(F_{q^2}) is q^2 + 1", n=n, q=q)

    for kind, pairs in (("symplectic", ((2, 2), (2, 3), (4, 2), (4, 3))), ("hermitian", ((3, 2), (3, 3), (4, 2), (4, 3)))):
        for n, q in pairs:
            add("prop3.1.smoothness", smoothness.check_smoothness,
                "the invariant hypersurface of degree q + 1 is smooth", kind=kind, n=n, q=q, tower_depth=min(depth, 2))
    add("prop3.1.smoothness.negative", smoothness.smoothness_control,
        "x1^p = 0 is singular everywhere", p=3, n=3)

    add("rem5.2.lucas-condition", cone.check_lucas_table,
        "Lucas residues decide C(n, 1..3) ≡ 0 mod p", n_max=64)
    add("rem5.2.lucas-condition.negative", cone.cone_condition_control,
        "C(6, 2) = 15 is odd, so the cone condition fails for (6, 2)", n=6, p=2)
    for n in range(3, 17):
        add("lem5.1d.shift-identities", cone.check_shift_identities,
            "shift identities for s1, s2, s3 under x ↦ αx + β", n=n)
    for n, q in ((7, 7), (8, 2), (9, 3)):
        add("lem5.1d.cone-closure", cone.check_cone_closure,
            "Y123 is a cone over the diagonal point when C(n, 1..3) ≡ 0 mod p", n=n, q=q)
    add("lem5.1d.cone-closure.negative", cone.cone_closure_control,
        "closure breaks for (n, q) = (6, 5)", n=6, q=5)

    add("lem5.1c.y123-free", geometry.y123_generic_freeness,
        "S_n acts on Y123 with a trivial-stabilizer point", n=7, q=7, escalation=(49,))
    add("prop6.1b.z123-descent", geometry.z123_construct_and_verify,
        "the S_n-action descends to Z123 and has a trivial-stabilizer class", n=7, q=7, escalation=(49,))
    add("prop6.1b.z123-descent", geometry.z123_construct_and_verify,
        "the S_n-action descends to Z123 and has a trivial-stabilizer class", n=8, q=2, escalation=(4, 16), heavy=True)
    add("lem5.1b.degree-dimension", geometry.y123_degree_and_dimension,
        "Y123 has degree at most 6 and dimension n − 4; Z123 has dimension n − 5",
        n=7, q=7, tower_depth=depth, trials=trials)
    add("lem5.1b.degree-dimension", geometry.y123_degree_and_dimension,
        "Y123 has degree at most 6 and dimension n − 4; Z123 has dimension n − 5",
        n=7, q=7, tower_depth=3, trials=4 * trials, heavy=True)
    add("lem5.1b.hyperplane-calibration", geometry.check_hyperplane_control,
        "{s1 = 0} has degree 1 and dimension n − 2", n=7, q=7)

    add("sec2.3.psl2-9", groups.check_psl2_9, "|PSL2(9)| = 360, simple and 2-transitive; A6 ≅ PSL2(9)")
    add("thm1.3.weyl-e6", groups.check_weyl_sequence, "1 → SU4(2) → W(E6) → Z/2 → 1")
    add("thm1.3.sp4-3", groups.check_sp4_3, "|Sp4(3)| = 51840 and PSp4(3) is simple of order 25920")
    add("thm1.3.su4-2", groups.check_su4_2, "|SU4(2)| = |PSp4(3)| = 25920")
    add("sec3.classical-orders", groups.check_classical_orders, "classical group orders and scalar quotients")
    add("sec4.central-product", groups.check_central_products, "|G ∘ H| = |G|·|H| / |Z|")
    add("lem2.3.faithful-vs-free", groups.check_faithful_vs_free,
        "faithful actions need not have trivial-stabilizer points on invariant hyperplanes", n=3, q=7)

    add("intro.bound-table", bounds.check_bound_table, "upper bounds on rd_p for S6, S7, S8 and W(E6)")
    return registry


def default_registry() -> CheckRegistry:
    return build_registry(get_config())
