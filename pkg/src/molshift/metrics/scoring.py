"""Evaluation quantities for attribute transfer runs.

A TaskSpec names the attribute being shifted (predicted toxicity or
synthetic-accessibility score), the success threshold on the output, and
the score ranges that define the source and target pools. Both desk
tasks push the score downward, so improvement is property(x) -
property(y).
"""

import math
from dataclasses import dataclass
from typing import Callable

from ..smiles import MolGraph, SmilesError, read_smiles
from ..smiles.valence import validate

PSS_FLOOR = 1e-6
SCALE_FLOOR = 1e-6


class ScoringFailure(RuntimeError):
    pass


class NegativeFactor(ValueError):
    pass


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_open: bool = False
    hi_open: bool = False

    def __contains__(self, value: float) -> bool:
        above = value > self.lo if self.lo_open else value >= self.lo
        below = value < self.hi if self.hi_open else value <= self.hi
        return above and below


@dataclass(frozen=True)
class TaskSpec:
    name: str
    scorer: Callable[[MolGraph], float]
    success_threshold: float  # output passes when score < threshold
    source_range: Interval
    target_range: Interval
    pss_threshold: float = 0.7

    def __post_init__(self):
        # every target-pool member must already satisfy the style condition
        assert self.target_range.hi <= self.success_threshold

    def score(self, graph: MolGraph) -> float:
        try:
            value = self.scorer(graph)
        except Exception as exc:  # pragma: no cover - scorer-specific
            raise ScoringFailure(f"{self.name} scorer failed: {exc}") from exc
        if not math.isfinite(value):
            raise ScoringFailure(f"{self.name} scorer returned {value}")
        return float(value)

    def label(self, score: float) -> str:
        if score in self.source_range:
            return "source"
        if score in self.target_range:
            return "target"
        return "neither"

    def style_success(self, score: float) -> bool:
        return score < self.success_threshold


def toxicity_task(scorer: Callable[[MolGraph], float]) -> TaskSpec:
    return TaskSpec(
        name="toxicity",
        scorer=scorer,
        success_threshold=0.1,
        source_range=Interval(0.9, math.inf, lo_open=True),
        target_range=Interval(-math.inf, 0.03, hi_open=True),
    )


def synthesizability_task(scorer: Callable[[MolGraph], float]) -> TaskSpec:
    return TaskSpec(
        name="synthesizability",
        scorer=scorer,
        success_threshold=2.5,
        source_range=Interval(5.0, 8.0),
        target_range=Interval(0.0, 2.5),
    )


def improvement(x: MolGraph, y: MolGraph, task: TaskSpec) -> float:
    """Signed shift toward the target style (positive = better)."""
    return task.score(x) - task.score(y)


def property_scales(vectors) -> dict[str, float]:
    """Per-property interdecile range (90th - 10th percentile) over a
    corpus, floored so degenerate properties cannot blow up PSS."""
    from ..chemprops import PropertyVector

    rows = [v.as_tuple() for v in vectors]
    if not rows:
        raise ValueError("no property vectors to calibrate scales from")
    scales = {}
    n = len(rows)
    for col, name in enumerate(PropertyVector.NAMES):
        values = sorted(row[col] for row in rows)
        lo = values[int(0.10 * (n - 1))]
        hi = values[int(round(0.90 * (n - 1)))]
        scales[name] = max(hi - lo, SCALE_FLOOR)
    return scales


def pss(x_props, y_props, scales: dict[str, float]) -> float:
    """Mean over the 8 content properties of max(0, 1 - |delta| / R_p),
    floored into (0, 1]."""
    sims = []
    for name, xv, yv in zip(x_props.NAMES, x_props.as_tuple(), y_props.as_tuple()):
        sims.append(max(0.0, 1.0 - abs(xv - yv) / scales[name]))
    return max(math.fsum(sims) / len(sims), PSS_FLOOR)


def validity_rate(outputs: list[str]) -> float:
    """Percentage of strings that parse and pass valence validation."""
    if not outputs:
        return 0.0
    ok = 0
    for s in outputs:
        try:
            graph = read_smiles(s)
        except SmilesError:
            continue
        if validate(graph).valid:
            ok += 1
    return 100.0 * ok / len(outputs)
