"""Structural alert matching.

Patterns are small query graphs with per-atom predicates (element
alternatives, aromatic flag, formal charge) and per-bond order
predicates. Matching is subgraph monomorphism by backtracking: every
pattern bond must map onto a graph bond that satisfies its predicate;
extra graph bonds between mapped atoms are allowed.
"""

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from ..smiles.graph import BondOrder, MolGraph

_ANY = "-"
_ORDER_BY_NAME = {
    "single": BondOrder.SINGLE,
    "double": BondOrder.DOUBLE,
    "triple": BondOrder.TRIPLE,
    "aromatic": BondOrder.AROMATIC,
}


@dataclass(frozen=True)
class AtomQuery:
    elements: frozenset[str]  # empty = any element
    aromatic: bool | None
    charge: int | None

    def matches(self, graph: MolGraph, idx: int) -> bool:
        atom = graph.atoms[idx]
        if self.elements and atom.element not in self.elements:
            return False
        if self.aromatic is not None and atom.aromatic != self.aromatic:
            return False
        if self.charge is not None and atom.formal_charge != self.charge:
            return False
        return True


@dataclass(frozen=True)
class BondQuery:
    a: int
    b: int
    order: BondOrder | None  # None = any


@dataclass(frozen=True)
class AlertPattern:
    id: str
    name: str
    atoms: tuple[AtomQuery, ...]
    bonds: tuple[BondQuery, ...]

    def neighbors(self, idx: int) -> list[tuple[int, BondOrder | None]]:
        out = []
        for bond in self.bonds:
            if bond.a == idx:
                out.append((bond.b, bond.order))
            elif bond.b == idx:
                out.append((bond.a, bond.order))
        return out


def parse_alert_file(text: str) -> tuple[AlertPattern, ...]:
    patterns = []
    current: dict | None = None

    def finish():
        if current is not None:
            patterns.append(
                AlertPattern(
                    id=current["id"],
                    name=current["name"],
                    atoms=tuple(current["atoms"]),
                    bonds=tuple(current["bonds"]),
                )
            )

    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if fields[0] == "alert":
            finish()
            current = {"id": fields[1], "name": fields[2], "atoms": [], "bonds": []}
        elif fields[0] == "atom":
            _, index, elements, aromatic, charge = fields
            assert int(index) == len(current["atoms"]), "atom rows must be in order"
            current["atoms"].append(
                AtomQuery(
                    elements=frozenset() if elements == _ANY else frozenset(elements.split(",")),
                    aromatic=None if aromatic == _ANY else aromatic == "1",
                    charge=None if charge == _ANY else int(charge),
                )
            )
        elif fields[0] == "bond":
            _, a, b, order = fields
            current["bonds"].append(
                BondQuery(
                    a=int(a),
                    b=int(b),
                    order=None if order == _ANY else _ORDER_BY_NAME[order],
                )
            )
        else:
            raise ValueError(f"unknown alert file row: {fields[0]!r}")
    finish()
    return tuple(patterns)


@lru_cache(maxsize=1)
def bundled_alerts() -> tuple[AlertPattern, ...]:
    text = resources.files("molshift.tables").joinpath("alerts.txt").read_text()
    return parse_alert_file(text)


def _has_embedding(pattern: AlertPattern, graph: MolGraph) -> bool:
    n_pattern = len(pattern.atoms)
    if n_pattern > len(graph.atoms):
        return False
    bond_order = {}
    for bond in graph.bonds:
        bond_order[(bond.a, bond.b)] = bond.order
        bond_order[(bond.b, bond.a)] = bond.order

    mapping: dict[int, int] = {}
    used = set()

    # order pattern atoms so each one (after the first) touches a mapped atom
    order = [0]
    placed = {0}
    while len(order) < n_pattern:
        for q in range(n_pattern):
            if q in placed:
                continue
            if any(nb in placed for nb, _ in pattern.neighbors(q)):
                order.append(q)
                placed.add(q)
                break
        else:
            raise ValueError(f"alert pattern {pattern.id} is not connected")

    def candidates(q: int):
        anchored = [
            (nb, order_pred)
            for nb, order_pred in pattern.neighbors(q)
            if nb in mapping
        ]
        if anchored:
            first_nb, _ = anchored[0]
            pool = [b.other(mapping[first_nb]) for b in graph.adjacency[mapping[first_nb]]]
        else:
            pool = range(len(graph.atoms))
        for g in pool:
            if g in used or not pattern.atoms[q].matches(graph, g):
                continue
            ok = True
            for nb, order_pred in anchored:
                got = bond_order.get((g, mapping[nb]))
                if got is None or (order_pred is not None and got is not order_pred):
                    ok = False
                    break
            if ok:
                yield g

    def extend(k: int) -> bool:
        if k == n_pattern:
            return True
        q = order[k]
        for g in candidates(q):
            mapping[q] = g
            used.add(g)
            if extend(k + 1):
                return True
            del mapping[q]
            used.remove(g)
        return False

    return extend(0)


def match_alerts(
    graph: MolGraph, alerts: tuple[AlertPattern, ...] | None = None
) -> list[str]:
    """Ids of all alert patterns with at least one embedding in the graph."""
    if alerts is None:
        alerts = bundled_alerts()
    return [p.id for p in alerts if _has_embedding(p, graph)]
