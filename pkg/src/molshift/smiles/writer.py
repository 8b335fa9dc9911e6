"""Deterministic SMILES writer.

DFS from a canonical-ish start atom; Morgan-style iterative degree
refinement breaks neighbor ties so the same graph always serializes the
same way, regardless of input atom order.
"""

from .graph import BondOrder, MolGraph

_BOND_TEXT = {
    BondOrder.SINGLE: "",
    BondOrder.DOUBLE: "=",
    BondOrder.TRIPLE: "#",
    BondOrder.AROMATIC: "",
}

_CHARGE_TEXT = {
    1: "+", 2: "++", 3: "+++",
    -1: "-", -2: "--", -3: "---",
}


def morgan_ranks(graph: MolGraph) -> list[int]:
    """Iteratively refined connectivity ranks (extended-connectivity style).

    Initial invariant mixes element, aromaticity, charge and degree;
    refinement folds in sorted neighbor ranks until the partition stops
    splitting.
    """
    n = len(graph.atoms)

    def hydrogens(i: int) -> int:
        a = graph.atoms[i]
        if a.explicit_h is not None:
            return a.explicit_h
        return graph.implicit_h[i] if graph.implicit_h else -1

    keys: list[tuple] = [
        (
            a.element,
            a.aromatic,
            a.formal_charge,
            hydrogens(i),
            a.isotope or 0,
            tuple(sorted(b.order.value for b in graph.adjacency[i])),
        )
        for i, a in enumerate(graph.atoms)
    ]
    ranks = _refine(graph, _ranks_of(keys))
    # Split remaining tied classes one member at a time. Tied atoms are
    # almost always related by an automorphism, so which member is
    # promoted does not change the output; for pathological regular
    # graphs this degrades to input-order tie-breaking.
    while True:
        counts: dict[int, int] = {}
        for r in ranks:
            counts[r] = counts.get(r, 0) + 1
        tied = [r for r, c in counts.items() if c > 1]
        if not tied:
            return ranks
        target = min(tied)
        chosen = ranks.index(target)
        ranks = _refine(
            graph, _ranks_of([(r, i != chosen) for i, r in enumerate(ranks)])
        )


def _refine(graph: MolGraph, ranks: list[int]) -> list[int]:
    for _ in range(len(ranks)):
        keys = [
            (
                ranks[i],
                tuple(
                    sorted(
                        (b.order.value, ranks[b.other(i)]) for b in graph.adjacency[i]
                    )
                ),
            )
            for i in range(len(ranks))
        ]
        new = _ranks_of(keys)
        if new == ranks:
            break
        ranks = new
    return ranks


def _ranks_of(keys: list[tuple]) -> list[int]:
    order = {k: r for r, k in enumerate(sorted(set(keys)))}
    return [order[k] for k in keys]


def _atom_text(graph: MolGraph, idx: int) -> str:
    atom = graph.atoms[idx]
    symbol = atom.element.lower() if atom.aromatic else atom.element
    if atom.explicit_h is None and atom.formal_charge == 0 and atom.isotope is None:
        return symbol
    h = graph.total_h(idx)
    h_text = "" if h == 0 else ("H" if h == 1 else f"H{h}")
    isotope = "" if atom.isotope is None else str(atom.isotope)
    charge = _CHARGE_TEXT.get(atom.formal_charge, "")
    return f"[{isotope}{symbol}{h_text}{charge}]"


def _bond_text(graph: MolGraph, a: int, b: int, order: BondOrder) -> str:
    # a plain bond between two aromatic atoms would read as aromatic, so
    # single bonds there need the explicit dash (e.g. biphenyl)
    if (
        order is BondOrder.SINGLE
        and graph.atoms[a].aromatic
        and graph.atoms[b].aromatic
    ):
        return "-"
    return _BOND_TEXT[order]


def write(graph: MolGraph) -> str:
    """Serialize a molecular graph to SMILES. Deterministic: equal graphs
    produce equal strings, with disconnected components sorted and joined
    by dots."""
    n = len(graph.atoms)
    if n == 0:
        return ""
    ranks = morgan_ranks(graph)

    def ordered(i: int) -> list:
        return sorted(graph.adjacency[i], key=lambda b: (ranks[b.other(i)], b.other(i)))

    # DFS edge classification: tree edges drive the walk, back edges
    # become ring-closure digits
    visited = [False] * n
    children: list[list[tuple[int, BondOrder]]] = [[] for _ in range(n)]
    closures: list[list[tuple[int, BondOrder]]] = [[] for _ in range(n)]
    roots: list[int] = []
    for start in sorted(range(n), key=lambda i: (graph.component[i], ranks[i], i)):
        if visited[start]:
            continue
        roots.append(start)
        visited[start] = True
        pushed = set()
        stack: list[tuple[int, int, BondOrder]] = []
        for bond in reversed(ordered(start)):
            stack.append((start, bond.other(start), bond.order))
            pushed.add((min(start, bond.other(start)), max(start, bond.other(start))))
        while stack:
            parent, node, order = stack.pop()
            if visited[node]:
                closures[parent].append((node, order))
                closures[node].append((parent, order))
                continue
            visited[node] = True
            children[parent].append((node, order))
            for bond in reversed(ordered(node)):
                other = bond.other(node)
                key = (min(node, other), max(node, other))
                if key in pushed:
                    continue
                pushed.add(key)
                stack.append((node, other, bond.order))

    free_digits = list(range(99, 0, -1))
    digit_of: dict[tuple[int, int], int] = {}

    def digit_text(d: int) -> str:
        return str(d) if d < 10 else f"%{d:02d}"

    def emit(root: int) -> str:
        out: list[str] = []
        stack: list[tuple] = [("atom", root, -1, BondOrder.SINGLE)]
        while stack:
            op, *args = stack.pop()
            if op == "text":
                out.append(args[0])
                continue
            node, parent, order = args
            if parent >= 0:
                out.append(_bond_text(graph, parent, node, order))
            out.append(_atom_text(graph, node))
            for other, border in sorted(closures[node], key=lambda c: (ranks[c[0]], c[0])):
                key = (min(node, other), max(node, other))
                if key not in digit_of:
                    digit_of[key] = free_digits.pop()
                    out.append(_bond_text(graph, node, other, border))
                    out.append(digit_text(digit_of[key]))
                else:
                    d = digit_of.pop(key)
                    out.append(_bond_text(graph, node, other, border))
                    out.append(digit_text(d))
                    free_digits.append(d)
                    free_digits.sort(reverse=True)
            kids = children[node]
            for i, (child, border) in reversed(list(enumerate(kids))):
                if i < len(kids) - 1:
                    stack.append(("text", ")"))
                stack.append(("atom", child, node, border))
                if i < len(kids) - 1:
                    stack.append(("text", "("))
        return "".join(out)

    return ".".join(sorted(emit(root) for root in roots))
