"""Shared test oracles, independent of the package internals.

The isomorphism check is an exhaustive backtracking matcher — fine for
the <=30-atom graphs used in tests, and deliberately not the package's
own Morgan machinery so writer bugs can't hide behind themselves.
"""

from molshift.smiles import Bond, MolGraph


def _node_label(graph: MolGraph, i: int) -> tuple:
    a = graph.atoms[i]
    # isotope None -> 0 keeps labels sortable alongside isotope-tagged atoms
    return (a.element, a.aromatic, a.formal_charge, a.isotope or 0, graph.total_h(i))


def _bond_map(graph: MolGraph) -> dict[tuple[int, int], str]:
    out = {}
    for b in graph.bonds:
        out[(b.a, b.b)] = b.order.name
        out[(b.b, b.a)] = b.order.name
    return out


def graph_isomorphic(g1: MolGraph, g2: MolGraph) -> bool:
    """Exhaustive label-preserving isomorphism test (atoms, charges,
    total hydrogens, bond orders)."""
    n = len(g1.atoms)
    if n != len(g2.atoms) or len(g1.bonds) != len(g2.bonds):
        return False
    labels1 = [_node_label(g1, i) for i in range(n)]
    labels2 = [_node_label(g2, i) for i in range(n)]
    if sorted(labels1) != sorted(labels2):
        return False
    bonds1 = _bond_map(g1)
    bonds2 = _bond_map(g2)
    adj1 = [[b.other(i) for b in g1.adjacency[i]] for i in range(n)]
    candidates = [
        [j for j in range(n) if labels2[j] == labels1[i] and len(g2.adjacency[j]) == len(adj1[i])]
        for i in range(n)
    ]
    mapping: dict[int, int] = {}
    used = [False] * n

    # match most-constrained atoms first
    order = sorted(range(n), key=lambda i: len(candidates[i]))

    def extend(k: int) -> bool:
        if k == n:
            return True
        i = order[k]
        for j in candidates[i]:
            if used[j]:
                continue
            ok = True
            for nb in adj1[i]:
                if nb in mapping:
                    jm = mapping[nb]
                    if bonds2.get((j, jm)) != bonds1[(i, nb)]:
                        ok = False
                        break
            if not ok:
                continue
            mapping[i] = j
            used[j] = True
            if extend(k + 1):
                return True
            del mapping[i]
            used[j] = False
        return False

    return extend(0)


def relabel(graph: MolGraph, perm: list[int]) -> MolGraph:
    """Apply an atom-index permutation: atom i of the result is atom
    perm[i] of the input."""
    inverse = [0] * len(perm)
    for new, old in enumerate(perm):
        inverse[old] = new
    atoms = tuple(graph.atoms[old] for old in perm)
    bonds = tuple(
        Bond(min(inverse[b.a], inverse[b.b]), max(inverse[b.a], inverse[b.b]), b.order)
        for b in graph.bonds
    )
    implicit = tuple(graph.implicit_h[old] for old in perm) if graph.implicit_h else ()
    return MolGraph(atoms=atoms, bonds=bonds, implicit_h=implicit)
