"""Synthetic-accessibility scoring.

Fragment-frequency flavor: molecules built from fragments that are common
in a reference corpus score as easy; rare fragments, large size, fused or
oversized rings and charge centers push the score up. Output is rescaled
to [1, 10], higher = harder to synthesize.
"""

import json
import math
from dataclasses import dataclass
from .fingerprint import environment_ids
from ..smiles.graph import MolGraph

FRAGMENT_RADIUS = 2
MACRO_RING_SIZE = 8  # rings strictly larger than this take the penalty


class EmptyTable(ValueError):
    def __init__(self):
        super().__init__("fragment frequency table has no entries")


@dataclass(frozen=True)
class FragmentFreqTable:
    contributions: dict[int, float]  # fragment id -> log frequency
    lo: float  # raw score mapped to 10 (1st percentile, hardest)
    hi: float  # raw score mapped to 1 (99th percentile, easiest)
    seed: int

    def to_json(self) -> str:
        return json.dumps(
            {
                "contributions": {str(k): v for k, v in self.contributions.items()},
                "lo": self.lo,
                "hi": self.hi,
                "seed": self.seed,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "FragmentFreqTable":
        data = json.loads(text)
        return cls(
            contributions={int(k): v for k, v in data["contributions"].items()},
            lo=data["lo"],
            hi=data["hi"],
            seed=data["seed"],
        )


def _fragment_ids(graph: MolGraph, seed: int) -> list[int]:
    ids = []
    for level in environment_ids(graph, FRAGMENT_RADIUS, seed):
        ids.extend(level)
    return ids


def _ring_bond_keys(ring: tuple[int, ...]):
    for i, a in enumerate(ring):
        b = ring[(i + 1) % len(ring)]
        yield (min(a, b), max(a, b))


def complexity_penalty(graph: MolGraph) -> float:
    n = len(graph.atoms)
    size = n ** 1.005 - n
    macro = sum(1 for ring in graph.rings if len(ring) > MACRO_RING_SIZE)
    macro_penalty = math.log(macro + 1)
    bond_ring_count: dict[tuple[int, int], int] = {}
    for ring in graph.rings:
        for key in _ring_bond_keys(ring):
            bond_ring_count[key] = bond_ring_count.get(key, 0) + 1
    fused = sum(1 for c in bond_ring_count.values() if c >= 2)
    fused_penalty = math.log(fused + 1)
    charged = sum(1 for a in graph.atoms if a.formal_charge != 0)
    charge_penalty = math.log(charged + 1)
    return size + macro_penalty + fused_penalty + charge_penalty


def raw_score(graph: MolGraph, table: FragmentFreqTable) -> float:
    """Mean log-frequency of the molecule's fragments minus the
    complexity penalty; unbounded, higher = easier."""
    if not table.contributions:
        raise EmptyTable()
    ids = _fragment_ids(graph, table.seed)
    # fsum keeps the mean independent of atom enumeration order
    fragment_score = math.fsum(table.contributions.get(i, 0.0) for i in ids) / len(ids)
    return fragment_score - complexity_penalty(graph)


def sa_score(graph: MolGraph, table: FragmentFreqTable) -> float:
    """Synthetic-accessibility score in [1, 10], higher = harder."""
    raw = raw_score(graph, table)
    span = table.hi - table.lo
    if span <= 0:
        span = 1.0
    eased = (raw - table.lo) / span  # 0 at the hard end, 1 at the easy end
    return min(10.0, max(1.0, 10.0 - 9.0 * eased))


def build_fragment_table(
    graphs: list[MolGraph], seed: int = 0
) -> FragmentFreqTable:
    """Count radius-2 fragments over a reference corpus and fix the
    calibration bounds at the 1st/99th percentiles of the raw scores."""
    counts: dict[int, int] = {}
    per_molecule_ids = []
    for graph in graphs:
        ids = _fragment_ids(graph, seed)
        per_molecule_ids.append(ids)
        for i in ids:
            counts[i] = counts.get(i, 0) + 1
    if not counts:
        raise EmptyTable()
    contributions = {i: math.log(c) for i, c in counts.items()}
    table = FragmentFreqTable(contributions=contributions, lo=0.0, hi=1.0, seed=seed)
    raws = sorted(raw_score(g, table) for g in graphs)
    lo = raws[int(0.01 * len(raws))]
    hi = raws[min(len(raws) - 1, int(0.99 * len(raws)))]
    if hi <= lo:
        hi = lo + 1.0
    return FragmentFreqTable(contributions=contributions, lo=lo, hi=hi, seed=seed)
