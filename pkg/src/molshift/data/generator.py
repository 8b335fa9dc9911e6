"""Seeded desk-scale corpus generator.

Molecules are assembled as graphs: pick a core skeleton, then bolt on
substituent fragments at atoms with spare valence. Half the draws use
simple cores with few substituents and half use fused/macrocyclic cores
with many, so downstream synthetic-accessibility scores spread into two
well-separated lobes. Everything is re-validated before acceptance, so
every emitted string parses and passes valence checks by construction.
"""

import random

from ..smiles import BondOrder, MolGraph, parse_smiles, write
from ..smiles.graph import Bond
from ..smiles.valence import assign_implicit_hydrogens, validate

# The easy lane is one tight structural family (plain rings and a narrow
# band of chain lengths) so its local environments repeat across the
# whole corpus; fragment-frequency scores then cluster near the easy end.
EASY_CORES = (
    "C1CCCCC1", "C1CCCC1", "c1ccccc1",
    "CCCCCC", "CCCCCCC", "CCCCCCCC", "CCCCCCCCC", "CCCCCCCCCC",
    "CCCCCCCCCCC", "CCCCCCCCCCCC", "CCCCCCCCCCCCC", "CCCCCCCCCCCCCC",
    "CCCCCCCCCCCCCCC", "CCCCCCCCCCCCCCCC",
    "C1CCCCCCCCCCC1", "C1CCCCCCCCCCCCC1",
)

EASY_LANE_PROBABILITY = 0.66

HARD_CORES = (
    "c1ccc2ccccc2c1", "C1CC2CCCCC2C1", "c1ccc2c(c1)CCCC2",
    "C1CC2CCC1CC2", "c1ccc2ncccc2c1", "C1CC2CCCC2CC1",
    "c1ccc2c(c1)oc1ccccc12", "C1CC2CC3CCCC3CC2CC1", "c1ccc2cc3ccccc3cc2c1",
)

# (fragment, weight); the attachment point is always fragment atom 0.
# The easy lane sticks to a handful of plain decorations so its local
# environments repeat across the corpus; the hard lane adds the rare,
# penalized chemistry.
EASY_SUBSTITUENTS = (
    ("C", 10), ("O", 8), ("CC", 5), ("OC", 4), ("N", 3), ("CCC", 4),
    ("CCO", 4),
)

HARD_SUBSTITUENTS = EASY_SUBSTITUENTS + (
    ("C(=O)O", 4), ("C#N", 4), ("C(C)=O", 4), ("N(C)C", 3),
    ("C(=O)N", 3), ("S", 3), ("SC", 3), ("Br", 3), ("C(F)(F)F", 3),
    ("[N+](=O)[O-]", 2), ("C(=O)[O-]", 1), ("[NH3+]", 1),
    ("c1ccccc1", 3), ("C1CCCCC1", 2),
)

SUBSTITUENTS = HARD_SUBSTITUENTS  # full vocabulary, for audits

# conservative spare-valence caps so decorated atoms stay conventional
_ATTACH_CAP = {"C": 4, "N": 3, "O": 2, "S": 2}


def _attachment_points(graph: MolGraph) -> list[int]:
    points = []
    for idx, atom in enumerate(graph.atoms):
        if atom.formal_charge != 0 or atom.explicit_h is not None:
            continue
        if atom.aromatic:
            if atom.element == "C" and graph.degree(idx) == 2:
                points.append(idx)
            continue
        cap = _ATTACH_CAP.get(atom.element)
        if cap is not None and graph.bond_order_sum(idx) + 1 <= cap:
            points.append(idx)
    return points


def _attach(base: MolGraph, fragment: MolGraph, at: int) -> MolGraph:
    offset = len(base.atoms)
    bonds = list(base.bonds)
    bonds.extend(Bond(b.a + offset, b.b + offset, b.order) for b in fragment.bonds)
    bonds.append(Bond(at, offset, BondOrder.SINGLE))
    return MolGraph(atoms=base.atoms + fragment.atoms, bonds=tuple(bonds))


def _random_molecule(rng: random.Random) -> MolGraph | None:
    hard = rng.random() >= EASY_LANE_PROBABILITY
    core = rng.choice(HARD_CORES if hard else EASY_CORES)
    graph = parse_smiles(core)
    n_substituents = rng.choice((2, 2, 3, 3) if hard else (0, 1, 1, 2, 2))
    menu = HARD_SUBSTITUENTS if hard else EASY_SUBSTITUENTS
    names = [s for s, _ in menu]
    weights = [w for _, w in menu]
    for _ in range(n_substituents):
        points = _attachment_points(graph)
        if not points:
            break
        frag = parse_smiles(rng.choices(names, weights=weights, k=1)[0])
        graph = _attach(graph, frag, rng.choice(points))
    graph = assign_implicit_hydrogens(graph)
    if not validate(graph).valid:
        return None
    return graph


def make_desk_corpus(size: int = 10000, seed: int = 0, path=None) -> list[str]:
    """Exactly `size` unique molecules (deduplicated on the canonical
    writer output), deterministic by seed."""
    rng = random.Random(seed)
    seen = set()
    out = []
    attempts = 0
    while len(out) < size:
        attempts += 1
        if attempts > 200 * size:
            raise RuntimeError(f"generator stalled at {len(out)}/{size}")
        graph = _random_molecule(rng)
        if graph is None:
            continue
        smiles = write(graph)
        if smiles in seen:
            continue
        seen.add(smiles)
        out.append(smiles)
    if path is not None:
        with open(path, "w") as fh:
            fh.write("\n".join(out) + "\n")
    return out
