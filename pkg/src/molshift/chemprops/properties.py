"""The eight content properties used for similarity scoring and guidance.

mw, logp, hba, hbd, rot_bonds, rings, net_charge, tpsa. Conventions:
HBA counts N and O atoms; HBD counts N/O atoms bearing at least one
hydrogen; a rotatable bond is an acyclic single bond whose endpoints each
have two or more heavy neighbors (amide bonds are not excluded unless
asked); rings is the cycle rank of the graph.
"""

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from ..smiles.errors import UnsupportedElement
from ..smiles.graph import BondOrder, MolGraph

_HETEROATOMS = frozenset({"N", "O", "S", "P", "F", "Cl", "Br", "I"})
_HBA_ELEMENTS = frozenset({"N", "O"})


@dataclass(frozen=True)
class PropertyVector:
    mw: float
    logp: float
    hba: int
    hbd: int
    rot_bonds: int
    rings: int
    net_charge: int
    tpsa: float

    NAMES = ("mw", "logp", "hba", "hbd", "rot_bonds", "rings", "net_charge", "tpsa")

    def as_tuple(self) -> tuple[float, ...]:
        return (
            self.mw, self.logp, float(self.hba), float(self.hbd),
            float(self.rot_bonds), float(self.rings), float(self.net_charge),
            self.tpsa,
        )

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.NAMES, self.as_tuple()))


def _read_table(name: str) -> list[list[str]]:
    text = resources.files("molshift.tables").joinpath(name).read_text()
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            rows.append(line.split("\t"))
    return rows


@lru_cache(maxsize=1)
def atomic_weights() -> dict[str, float]:
    return {el: float(w) for el, w in _read_table("atomic_weights.txt")}


@lru_cache(maxsize=1)
def _logp_table() -> dict[tuple[str, bool], dict[int, float]]:
    table: dict[tuple[str, bool], dict[int, float]] = {}
    for el, aromatic, hetero, value in _read_table("logp.txt"):
        table.setdefault((el, aromatic == "1"), {})[int(hetero)] = float(value)
    return table


@lru_cache(maxsize=1)
def _tpsa_table() -> dict[tuple, float]:
    table = {}
    for el, arom, charge, hcount, ns, nd, nt, na, value in _read_table("tpsa.txt"):
        key = (el, arom == "1", int(charge), int(hcount), int(ns), int(nd), int(nt), int(na))
        table[key] = float(value)
    return table


def molecular_weight(graph: MolGraph) -> float:
    weights = atomic_weights()
    terms = []
    for i, atom in enumerate(graph.atoms):
        if atom.element not in weights:
            raise UnsupportedElement(atom.element)
        terms.append(weights[atom.element] + graph.total_h(i) * weights["H"])
    # fsum: exactly rounded, so the result is atom-order independent
    return math.fsum(terms)


def ring_count(graph: MolGraph) -> int:
    # cycle rank: independent cycles of the bond graph
    return len(graph.bonds) - len(graph.atoms) + graph.n_components


def rotatable_bonds(graph: MolGraph) -> int:
    count = 0
    for i, bond in enumerate(graph.bonds):
        if bond.order is not BondOrder.SINGLE or graph.ring_bond_flags[i]:
            continue
        if graph.degree(bond.a) >= 2 and graph.degree(bond.b) >= 2:
            count += 1
    return count


def log_p(graph: MolGraph) -> float:
    table = _logp_table()
    terms = []
    h_rows = table[("H", False)]
    for i, atom in enumerate(graph.atoms):
        key = (atom.element, atom.aromatic)
        if key not in table:
            key = (atom.element, False)
        if key not in table:
            raise UnsupportedElement(atom.element)
        rows = table[key]
        hetero = sum(
            1
            for b in graph.adjacency[i]
            if graph.atoms[b.other(i)].element in _HETEROATOMS
        )
        fitting = [h for h in rows if h <= hetero]
        terms.append(rows[max(fitting)] if fitting else rows[min(rows)])
        h_key = 1 if atom.element in _HETEROATOMS else 0
        terms.append(graph.total_h(i) * h_rows[h_key])
    return math.fsum(terms)


def tpsa(graph: MolGraph) -> float:
    table = _tpsa_table()
    terms = []
    for i, atom in enumerate(graph.atoms):
        if atom.element not in ("N", "O"):
            continue
        counts = {order: 0 for order in BondOrder}
        for b in graph.adjacency[i]:
            counts[b.order] += 1
        key = (
            atom.element,
            atom.aromatic,
            atom.formal_charge,
            graph.total_h(i),
            counts[BondOrder.SINGLE],
            counts[BondOrder.DOUBLE],
            counts[BondOrder.TRIPLE],
            counts[BondOrder.AROMATIC],
        )
        if key in table:
            terms.append(table[key])
        else:
            warnings.warn(
                f"no polar-surface contribution for {atom.element} environment {key}; "
                "counting 0",
                stacklevel=2,
            )
    return math.fsum(terms)


def content_properties(graph: MolGraph) -> PropertyVector:
    """Compute all eight content properties of a hydrogen-assigned graph."""
    hba = sum(1 for a in graph.atoms if a.element in _HBA_ELEMENTS)
    hbd = sum(
        1
        for i, a in enumerate(graph.atoms)
        if a.element in _HBA_ELEMENTS and graph.total_h(i) >= 1
    )
    return PropertyVector(
        mw=molecular_weight(graph),
        logp=log_p(graph),
        hba=hba,
        hbd=hbd,
        rot_bonds=rotatable_bonds(graph),
        rings=ring_count(graph),
        net_charge=sum(a.formal_charge for a in graph.atoms),
        tpsa=tpsa(graph),
    )
