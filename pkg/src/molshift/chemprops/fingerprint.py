"""Circular (neighborhood-hashing) fingerprints.

Environment ids come from a fixed 64-bit mixing hash (splitmix64 finalizer)
so fingerprints are identical across runs and platforms. Each atom
contributes one id per radius level; ids are folded into a fixed-width bit
vector by modulus.
"""

from dataclasses import dataclass

from ..smiles.graph import MolGraph

_MASK = (1 << 64) - 1
_ELEMENT_CODE = {
    el: i for i, el in enumerate(
        ("H", "B", "C", "N", "O", "F", "P", "S", "Cl", "Br", "I")
    )
}

DEFAULT_RADIUS = 2
DEFAULT_WIDTH = 2048


def _mix(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def _hash_ints(values: tuple[int, ...], seed: int) -> int:
    acc = _mix(seed)
    for v in values:
        acc = _mix(acc ^ (v & _MASK))
    return acc


@dataclass(frozen=True)
class Fingerprint:
    bits: frozenset[int]
    radius: int
    width: int

    def as_indicator(self) -> list[float]:
        dense = [0.0] * self.width
        for b in self.bits:
            dense[b] = 1.0
        return dense

    def tanimoto(self, other: "Fingerprint") -> float:
        if self.width != other.width:
            raise ValueError("fingerprint widths differ")
        union = len(self.bits | other.bits)
        if union == 0:
            return 1.0
        return len(self.bits & other.bits) / union


def environment_ids(graph: MolGraph, radius: int, seed: int = 0) -> list[list[int]]:
    """Per-level environment ids: result[r][i] is atom i's id at level r."""
    ids = []
    for i, atom in enumerate(graph.atoms):
        ids.append(
            _hash_ints(
                (
                    _ELEMENT_CODE[atom.element],
                    graph.degree(i),
                    atom.formal_charge + 8,
                    int(atom.aromatic),
                    graph.total_h(i),
                ),
                seed,
            )
        )
    levels = [ids]
    for _ in range(radius):
        prev = levels[-1]
        nxt = []
        for i in range(len(graph.atoms)):
            neighborhood = sorted(
                (b.order.value, prev[b.other(i)]) for b in graph.adjacency[i]
            )
            flat = [prev[i]]
            for order, nid in neighborhood:
                flat.extend((order, nid))
            nxt.append(_hash_ints(tuple(flat), seed))
        levels.append(nxt)
    return levels


def circular_fingerprint(
    graph: MolGraph,
    radius: int = DEFAULT_RADIUS,
    width: int = DEFAULT_WIDTH,
    seed: int = 0,
) -> Fingerprint:
    bits = set()
    for level in environment_ids(graph, radius, seed):
        for env_id in level:
            bits.add(env_id % width)
    return Fingerprint(bits=frozenset(bits), radius=radius, width=width)
