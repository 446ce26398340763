"""
网格扫描与结果输出
Space-time grid sweep, the results CSV and the diagnostics report.
"""
import csv
import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from .config_manager import Quantity
from .errors import SampleFlag, ViscorodError, join_flags
from .forcing import Tabulated, compose_sigma, compose_u
from .kernels import KernelSpec
from .oracle import oracle_response
from .util import fmt_float

logger = logging.getLogger(__name__)

RESULTS_HEADER = ("x", "t", "quantity", "value", "error_estimate", "flags")
ORACLE_GATE = 1e-3
ORACLE_FLOOR = 1e-2


@dataclass(frozen=True)
class FieldRecord:
    x: float
    t: float
    quantity: Quantity
    value: float
    error: float
    flags: FrozenSet[SampleFlag] = frozenset()

    def row(self) -> List[str]:
        return [
            fmt_float(self.x),
            fmt_float(self.t),
            self.quantity.value,
            fmt_float(self.value),
            fmt_float(self.error),
            join_flags(self.flags),
        ]


@dataclass(frozen=True)
class FieldResult:
    """All samples of one sweep, in grid order."""
    records: Tuple[FieldRecord, ...]

    def flag_counts(self) -> Counter:
        counts = Counter()
        for record in self.records:
            counts.update(f.value for f in record.flags)
        return counts

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(RESULTS_HEADER)
            for record in self.records:
                writer.writerow(record.row())


def grid_points(x_grid: Sequence[float], t_grid: Sequence[float],
                outputs: Sequence[Quantity]) -> List[Tuple[float, float, Quantity]]:
    """x outermost, then t, then quantity."""
    return [(x, t, q) for x in x_grid for t in t_grid for q in outputs]


def evaluate_sample(specs: Mapping[Quantity, KernelSpec], signal, x: float, t: float,
                    quantity: Quantity) -> FieldRecord:
    """One grid sample; numerical failures become flags, never exceptions."""
    spec = specs[quantity]
    try:
        if quantity is Quantity.DISPLACEMENT:
            sample = compose_u(spec, signal, x, t)
        else:
            sample = compose_sigma(spec, signal, x, t)
    except ViscorodError as exc:
        logger.warning(f"sample {quantity.value}(x={x:g}, t={t:g}) failed: {exc}")
        return FieldRecord(x, t, quantity, float("nan"), float("inf"), frozenset({SampleFlag.ACCURACY}))
    # 实数装配
    value = sample.value
    assert isinstance(value, float), f"non-real sample {value!r}"
    return FieldRecord(x, t, quantity, value, sample.error, sample.flags)


def sweep(specs: Mapping[Quantity, KernelSpec], signal, x_grid: Sequence[float],
          t_grid: Sequence[float], outputs: Sequence[Quantity], workers: int = 1) -> FieldResult:
    """Evaluate every grid point; results come back in grid order."""
    points = grid_points(x_grid, t_grid, outputs)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(lambda p: evaluate_sample(specs, signal, *p), points))
    else:
        records = [evaluate_sample(specs, signal, *p) for p in points]
    result = FieldResult(tuple(records))
    flagged = result.flag_counts().get(SampleFlag.ACCURACY.value, 0)
    if flagged:
        logger.warning(f"{flagged} of {len(records)} samples exceed the error budget")
    return result


@dataclass(frozen=True)
class OracleComparison:
    compared: int
    skipped: int
    max_abs: float
    max_rel: float
    gate: float = ORACLE_GATE

    @property
    def passed(self) -> bool:
        return self.compared > 0 and self.max_rel <= self.gate

    def render(self) -> str:
        if self.compared == 0:
            return f"oracle check: no comparable samples ({self.skipped} skipped)"
        verdict = "pass" if self.passed else "FAIL"
        return (
            f"oracle check: {self.compared} samples compared, {self.skipped} skipped\n"
            f"max |eval - oracle| = {self.max_abs:.6e}\n"
            f"max relative deviation = {self.max_rel:.6e} (gate {self.gate:g}): {verdict}"
        )


def compare_with_oracle(result: FieldResult, model, kappa: float, signal,
                        xi_max: Optional[float] = None) -> Tuple[FieldResult, OracleComparison]:
    """Bromwich inversion at every sample with t > 0.

    The relative deviation is |eval − oracle| / max(|oracle|, 1e-2·max|oracle|),
    the floor taken per quantity.  Samples the oracle cannot reproduce carry
    `oracle_skipped`.
    """
    tabulated = isinstance(signal, Tabulated)
    references: Dict[int, float] = {}
    records = list(result.records)
    for i, record in enumerate(records):
        if record.t <= 0.0:
            continue
        if tabulated:
            records[i] = replace(record, flags=record.flags | {SampleFlag.ORACLE_SKIPPED})
            continue
        try:
            references[i] = oracle_response(model, kappa, signal, record.quantity.value,
                                            record.x, record.t, xi_max).value
        except ViscorodError as exc:
            logger.warning(f"oracle skipped at x={record.x:g}, t={record.t:g}: {exc}")
            records[i] = replace(record, flags=record.flags | {SampleFlag.ORACLE_SKIPPED})

    scale: Dict[Quantity, float] = {}
    for i, ref in references.items():
        q = records[i].quantity
        scale[q] = max(scale.get(q, 0.0), abs(ref))

    max_abs = max_rel = 0.0
    for i, ref in references.items():
        record = records[i]
        deviation = abs(record.value - ref)
        floor = max(abs(ref), ORACLE_FLOOR * scale[record.quantity], 1e-300)
        max_abs = max(max_abs, deviation)
        max_rel = max(max_rel, deviation / floor)
    skipped = sum(1 for r in records if SampleFlag.ORACLE_SKIPPED in r.flags)
    comparison = OracleComparison(len(references), skipped, max_abs, max_rel)
    if comparison.compared:
        log = logger.info if comparison.passed else logger.warning
        log(f"oracle gate {'passed' if comparison.passed else 'failed'}: max relative deviation {max_rel:.3e}")
    return FieldResult(tuple(records)), comparison


def write_diagnostics(path, sections: Iterable[Tuple[str, str]]) -> None:
    """Plain-text report, one titled block per section."""
    blocks = []
    for title, body in sections:
        blocks.append(f"== {title} ==\n{body.rstrip()}\n")
    Path(path).write_text("\n".join(blocks), encoding="utf-8")
