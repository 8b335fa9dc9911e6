"""SMILES parser: token stream to molecular graph.

Supports the organic subset, bracket atoms with isotope/charge/H-count,
bond symbols - = # :, aromatic lowercase atoms, ring closures (single digit
and %nn), branches, and dot-separated components. Stereo bond markers
(/ and \\) parse as single bonds; @ chirality inside brackets is discarded.

A bond written between two aromatic atoms with no explicit symbol is
aromatic only if it ends up on a cycle; otherwise it is a plain single bond
(the biphenyl idiom). Explicit ':' bonds keep their aromatic order and are
left for validation to judge.
"""

import re
from dataclasses import replace

from .errors import (
    DanglingBond,
    RingBondConflict,
    UnbalancedBranch,
    UnclosedRingBond,
    UnknownCharacter,
    UnsupportedElement,
)
from .graph import Atom, Bond, BondOrder, MolGraph
from .tokens import Token, TokenKind, ring_label, tokenize

SUPPORTED_ELEMENTS = frozenset(
    ["B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I", "H"]
)
AROMATIC_ELEMENTS = frozenset(["B", "C", "N", "O", "P", "S"])

_BRACKET_RE = re.compile(
    r"""\[
    (?P<isotope>\d+)?
    (?P<symbol>[A-Z][a-z]?|[bcnops])
    (?P<chiral>@{1,2})?
    (?P<hcount>H\d*)?
    (?P<charge>\+{1,3}|-{1,3}|\+\d|-\d)?
    (?::\d+)?          # atom-map class, accepted and discarded
    \]""",
    re.VERBOSE,
)

_BOND_ORDERS = {
    "-": BondOrder.SINGLE,
    "=": BondOrder.DOUBLE,
    "#": BondOrder.TRIPLE,
    ":": BondOrder.AROMATIC,
    "/": BondOrder.SINGLE,  # stereo marker, direction dropped
    "\\": BondOrder.SINGLE,
}


def _parse_bracket_atom(token: Token) -> Atom:
    match = _BRACKET_RE.fullmatch(token.text)
    if match is None:
        raise UnknownCharacter(token.pos, token.text)
    symbol = match.group("symbol")
    aromatic = symbol[0].islower()
    element = symbol.capitalize() if aromatic else symbol
    if element not in SUPPORTED_ELEMENTS:
        raise UnsupportedElement(element, token.pos)
    if aromatic and element not in AROMATIC_ELEMENTS:
        raise UnsupportedElement(symbol, token.pos)
    hcount = match.group("hcount")
    if hcount is None:
        explicit_h = 0
    elif hcount == "H":
        explicit_h = 1
    else:
        explicit_h = int(hcount[1:])
    charge_text = match.group("charge")
    if charge_text is None:
        charge = 0
    elif charge_text[-1].isdigit():
        charge = int(charge_text[1:]) * (1 if charge_text[0] == "+" else -1)
    else:
        charge = len(charge_text) * (1 if charge_text[0] == "+" else -1)
    isotope = int(match.group("isotope")) if match.group("isotope") else None
    return Atom(element, aromatic, charge, explicit_h, isotope)


def _parse_plain_atom(token: Token) -> Atom:
    text = token.text
    if text.islower():
        return Atom(text.upper(), aromatic=True)
    return Atom(text)


def parse(tokens: list[Token]) -> MolGraph:
    """Build a MolGraph from a token list (see tokenize)."""
    atoms: list[Atom] = []
    bonds: list[Bond] = []
    bond_keys: set[frozenset[int]] = set()
    # Bonds whose aromatic order was implied by lowercase atoms rather than
    # written; demoted to single afterwards if they sit off-cycle.
    implied_aromatic: list[int] = []
    prev: int | None = None
    branch_stack: list[tuple[int | None, int]] = []
    pending: tuple[Token, BondOrder] | None = None
    open_rings: dict[int, tuple[int, BondOrder | None]] = {}

    def add_bond(a: int, b: int, order: BondOrder | None, label: int = -1):
        if a == b:
            raise RingBondConflict(label, "bond endpoints coincide")
        key = frozenset((a, b))
        if key in bond_keys:
            raise RingBondConflict(label, f"duplicate bond between atoms {a} and {b}")
        bond_keys.add(key)
        if order is None:
            if atoms[a].aromatic and atoms[b].aromatic:
                order = BondOrder.AROMATIC
                implied_aromatic.append(len(bonds))
            else:
                order = BondOrder.SINGLE
        bonds.append(Bond(a, b, order))

    for token in tokens:
        kind = token.kind
        if kind in (TokenKind.ATOM, TokenKind.BRACKET_ATOM):
            atom = (
                _parse_bracket_atom(token)
                if kind is TokenKind.BRACKET_ATOM
                else _parse_plain_atom(token)
            )
            atoms.append(atom)
            idx = len(atoms) - 1
            if prev is not None:
                add_bond(prev, idx, pending[1] if pending else None)
            elif pending is not None:
                raise DanglingBond(pending[0].pos)
            pending = None
            prev = idx
        elif kind is TokenKind.BOND:
            if pending is not None:
                raise DanglingBond(pending[0].pos)
            if prev is None:
                raise DanglingBond(token.pos)
            pending = (token, _BOND_ORDERS[token.text])
        elif kind is TokenKind.RING_CLOSURE:
            if prev is None:
                raise DanglingBond(token.pos)
            label = ring_label(token)
            order_here = pending[1] if pending else None
            pending = None
            if label in open_rings:
                other, order_there = open_rings.pop(label)
                if order_here is not None and order_there is not None and order_here != order_there:
                    raise RingBondConflict(label, "conflicting bond symbols")
                order = order_here if order_here is not None else order_there
                add_bond(other, prev, order, label)
            else:
                open_rings[label] = (prev, order_here)
        elif kind is TokenKind.BRANCH_OPEN:
            if prev is None:
                raise UnbalancedBranch(token.pos)
            if pending is not None:
                raise DanglingBond(pending[0].pos)
            branch_stack.append((prev, token.pos))
        elif kind is TokenKind.BRANCH_CLOSE:
            if not branch_stack:
                raise UnbalancedBranch(token.pos)
            if pending is not None:
                raise DanglingBond(pending[0].pos)
            prev, _ = branch_stack.pop()
        elif kind is TokenKind.DOT:
            if branch_stack:
                raise UnbalancedBranch(token.pos)
            if pending is not None:
                raise DanglingBond(pending[0].pos)
            prev = None

    if pending is not None:
        raise DanglingBond(pending[0].pos)
    if branch_stack:
        raise UnbalancedBranch(branch_stack[-1][1])
    if open_rings:
        raise UnclosedRingBond(min(open_rings))

    graph = MolGraph(tuple(atoms), tuple(bonds))
    if implied_aromatic:
        demote = [i for i in implied_aromatic if not graph.ring_bond_flags[i]]
        if demote:
            fixed = list(bonds)
            for i in demote:
                fixed[i] = replace(fixed[i], order=BondOrder.SINGLE)
            graph = MolGraph(tuple(atoms), tuple(fixed))
    return graph


def parse_smiles(smiles: str) -> MolGraph:
    """Tokenize and parse in one step."""
    return parse(tokenize(smiles))
