"""Attributed molecular graph produced by the SMILES parser.

Atoms, bonds and graphs are immutable; operations that change hydrogen
counts return new graphs. Adjacency and component labels are derived from
the bond list and cached.
"""

from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property


class BondOrder(Enum):
    SINGLE = 1
    DOUBLE = 2
    TRIPLE = 3
    AROMATIC = 4

    @property
    def valence(self) -> float:
        # Aromatic bonds count 1.5 toward valence bookkeeping.
        return 1.5 if self is BondOrder.AROMATIC else float(self.value)


@dataclass(frozen=True)
class Atom:
    element: str
    aromatic: bool = False
    formal_charge: int = 0
    explicit_h: int | None = None  # None: hydrogens are implicit
    isotope: int | None = None


@dataclass(frozen=True)
class Bond:
    a: int
    b: int
    order: BondOrder

    def other(self, idx: int) -> int:
        return self.b if idx == self.a else self.a


@dataclass(frozen=True)
class MolGraph:
    atoms: tuple[Atom, ...]
    bonds: tuple[Bond, ...]
    implicit_h: tuple[int, ...] = ()  # parallel to atoms once assigned

    @cached_property
    def adjacency(self) -> tuple[tuple[Bond, ...], ...]:
        adj: list[list[Bond]] = [[] for _ in self.atoms]
        for bond in self.bonds:
            adj[bond.a].append(bond)
            adj[bond.b].append(bond)
        return tuple(tuple(entries) for entries in adj)

    @cached_property
    def component(self) -> tuple[int, ...]:
        """Connected-component label per atom, in first-seen order."""
        labels = [-1] * len(self.atoms)
        current = 0
        for start in range(len(self.atoms)):
            if labels[start] >= 0:
                continue
            stack = [start]
            labels[start] = current
            while stack:
                at = stack.pop()
                for bond in self.adjacency[at]:
                    nb = bond.other(at)
                    if labels[nb] < 0:
                        labels[nb] = current
                        stack.append(nb)
            current += 1
        return tuple(labels)

    @property
    def n_components(self) -> int:
        return max(self.component) + 1 if self.atoms else 0

    def degree(self, idx: int) -> int:
        return len(self.adjacency[idx])

    def bond_order_sum(self, idx: int) -> float:
        return sum(b.order.valence for b in self.adjacency[idx])

    def total_h(self, idx: int) -> int:
        atom = self.atoms[idx]
        if atom.explicit_h is not None:
            return atom.explicit_h
        if self.implicit_h:
            return self.implicit_h[idx]
        return 0

    def with_implicit_h(self, counts: list[int]) -> "MolGraph":
        if len(counts) != len(self.atoms):
            raise ValueError("implicit hydrogen counts do not match atom count")
        return replace(self, implicit_h=tuple(counts))

    @cached_property
    def ring_bond_flags(self) -> tuple[bool, ...]:
        """For each bond, whether it lies on a cycle (i.e. is not a bridge)."""
        n = len(self.atoms)
        visited = [False] * n
        disc = [0] * n
        low = [0] * n
        is_bridge = [False] * len(self.bonds)
        bond_index = {}
        for i, bond in enumerate(self.bonds):
            bond_index[(bond.a, bond.b)] = i
            bond_index[(bond.b, bond.a)] = i
        timer = [1]
        for root in range(n):
            if visited[root]:
                continue
            # Iterative Tarjan bridge search; entries are (node, parent bond).
            stack: list[tuple[int, int, int]] = [(root, -1, 0)]
            while stack:
                node, via, state = stack.pop()
                if state == 0:
                    if visited[node]:
                        # Tree-edge candidate turned back edge while queued.
                        if via >= 0:
                            parent = self.bonds[via].other(node)
                            low[parent] = min(low[parent], disc[node])
                        continue
                    visited[node] = True
                    disc[node] = low[node] = timer[0]
                    timer[0] += 1
                    stack.append((node, via, 1))
                    for bond in self.adjacency[node]:
                        idx = bond_index[(bond.a, bond.b)]
                        if idx == via:
                            continue
                        nb = bond.other(node)
                        if not visited[nb]:
                            stack.append((nb, idx, 0))
                        else:
                            low[node] = min(low[node], disc[nb])
                else:
                    if via >= 0:
                        parent = self.bonds[via].other(node)
                        low[parent] = min(low[parent], low[node])
                        if low[node] > disc[parent]:
                            is_bridge[via] = True
        return tuple(not b for b in is_bridge)

    @cached_property
    def rings(self) -> tuple[tuple[int, ...], ...]:
        """A small cycle basis: for every non-tree bond, the shortest ring
        through it. Ring size statistics (macrocycles, fusion) read this."""
        cycles: list[tuple[int, ...]] = []
        seen = set()
        for i, bond in enumerate(self.bonds):
            if not self.ring_bond_flags[i]:
                continue
            path = self._shortest_path(bond.a, bond.b, skip_bond=i)
            if path is None:
                continue
            ring = tuple(path)
            key = frozenset(ring)
            if key not in seen:
                seen.add(key)
                cycles.append(ring)
        return tuple(cycles)

    def _shortest_path(self, src: int, dst: int, skip_bond: int) -> list[int] | None:
        from collections import deque

        prev = {src: -1}
        queue = deque([src])
        while queue:
            node = queue.popleft()
            if node == dst:
                path = [node]
                while prev[path[-1]] >= 0:
                    path.append(prev[path[-1]])
                return path
            for bond in self.adjacency[node]:
                if bond is self.bonds[skip_bond]:
                    continue
                nb = bond.other(node)
                if nb not in prev:
                    prev[nb] = node
                    queue.append(nb)
        return None
