"""Implicit hydrogen assignment and chemical validity checks.

The valence table lives in tables/valence.txt. Aromatic atoms are checked
without kekulization: each aromatic element declares whether it accepts a
ring double bond (benzene carbon, pyridine nitrogen), donates a lone pair
(furan oxygen, pyrrole NH), or may do either.
"""

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources

from .graph import BondOrder, MolGraph

MAX_ABS_CHARGE = 3


@dataclass(frozen=True)
class ElementValence:
    allowed: tuple[int, ...]
    pi_role: str  # acceptor | donor | either | none


@lru_cache(maxsize=1)
def valence_table() -> dict[str, ElementValence]:
    table = {}
    text = resources.files("molshift.tables").joinpath("valence.txt").read_text()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        element, valences, role = line.split("\t")
        table[element] = ElementValence(
            tuple(int(v) for v in valences.split(",")), role
        )
    return table


class FailureReason(Enum):
    OVER_VALENCE = "over_valence"
    AROMATIC_ATOM_NOT_IN_RING = "aromatic_atom_not_in_ring"
    AROMATIC_BOND_NOT_IN_RING = "aromatic_bond_not_in_ring"
    CHARGE_OUT_OF_RANGE = "charge_out_of_range"


@dataclass(frozen=True)
class Failure:
    where: int  # atom index
    reason: FailureReason


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    failures: tuple[Failure, ...]


def _aromatic_loads(graph: MolGraph, idx: int) -> tuple[int, ...]:
    """Possible sigma+pi bond loads of an aromatic atom, one per pi role."""
    entry = valence_table()[graph.atoms[idx].element]
    arom = sum(1 for b in graph.adjacency[idx] if b.order is BondOrder.AROMATIC)
    plain = sum(
        b.order.value for b in graph.adjacency[idx] if b.order is not BondOrder.AROMATIC
    )
    base = arom + plain
    if entry.pi_role == "acceptor":
        return (base + 1,)
    if entry.pi_role == "donor":
        return (base,)
    return (base + 1, base)  # either: prefer the acceptor reading


def assign_implicit_hydrogens(graph: MolGraph) -> MolGraph:
    """Return a copy of the graph with implicit hydrogen counts filled in.

    Bracket atoms keep their explicit count (implicit 0). Organic-subset
    atoms are topped up to the smallest allowed valence that fits their
    bond order sum; over-bonded atoms get 0 and are left for validate.
    """
    counts = []
    for idx, atom in enumerate(graph.atoms):
        if atom.explicit_h is not None:
            counts.append(0)
            continue
        entry = valence_table()[atom.element]
        if atom.aromatic:
            load = _aromatic_loads(graph, idx)[0]
        else:
            load = math.ceil(graph.bond_order_sum(idx))
        fitting = [v for v in entry.allowed if v >= load]
        counts.append(min(fitting) - load if fitting else 0)
    return graph.with_implicit_h(counts)


def validate(graph: MolGraph) -> ValidityReport:
    """Check valence conformance, aromatic ring membership and charge
    sanity. Failures are returned as data; nothing raises."""
    if len(graph.implicit_h) != len(graph.atoms):
        raise ValueError("graph needs assign_implicit_hydrogens before validate")
    failures = []
    table = valence_table()
    for idx, atom in enumerate(graph.atoms):
        if abs(atom.formal_charge) > MAX_ABS_CHARGE:
            failures.append(Failure(idx, FailureReason.CHARGE_OUT_OF_RANGE))
        entry = table[atom.element]
        hydrogens = graph.total_h(idx)
        allowed_max = max(entry.allowed) + atom.formal_charge
        if atom.aromatic:
            if entry.pi_role == "none":
                failures.append(Failure(idx, FailureReason.AROMATIC_ATOM_NOT_IN_RING))
                continue
            arom_bonds = sum(
                1 for b in graph.adjacency[idx] if b.order is BondOrder.AROMATIC
            )
            if arom_bonds < 2:
                failures.append(Failure(idx, FailureReason.AROMATIC_ATOM_NOT_IN_RING))
            load = min(_aromatic_loads(graph, idx)) + hydrogens
        else:
            load = math.ceil(graph.bond_order_sum(idx)) + hydrogens
        if load > allowed_max:
            failures.append(Failure(idx, FailureReason.OVER_VALENCE))
    for i, bond in enumerate(graph.bonds):
        if bond.order is BondOrder.AROMATIC and not graph.ring_bond_flags[i]:
            failures.append(Failure(bond.a, FailureReason.AROMATIC_BOND_NOT_IN_RING))
    return ValidityReport(valid=not failures, failures=tuple(failures))
