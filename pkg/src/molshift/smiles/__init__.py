"""SMILES lexing, parsing, validity checking and writing.

Covers the organic subset (B, C, N, O, P, S, F, Cl, Br, I, plus anything
in brackets), ring closures including %nn, branches, dots, charges,
isotopes and explicit hydrogen counts. Stereo markers are accepted and
discarded. Aromaticity is handled as written (no kekulization).
"""

from .errors import (
    DanglingBond,
    EmptyInput,
    RingBondConflict,
    SmilesError,
    UnbalancedBranch,
    UnclosedRingBond,
    UnknownCharacter,
    UnsupportedElement,
)
from .graph import Atom, Bond, BondOrder, MolGraph
from .parser import parse, parse_smiles
from .tokens import Token, TokenKind, tokenize
from .valence import (
    Failure,
    FailureReason,
    ValidityReport,
    assign_implicit_hydrogens,
    validate,
)
from .writer import morgan_ranks, write


def read_smiles(smiles: str) -> MolGraph:
    """Parse and hydrogenate in one step: the graph most callers want."""
    return assign_implicit_hydrogens(parse_smiles(smiles))


def is_valid(smiles: str) -> bool:
    """True iff the string parses and passes chemical validity checks."""
    try:
        graph = read_smiles(smiles)
    except SmilesError:
        return False
    return validate(graph).valid


__all__ = [
    "Atom",
    "Bond",
    "BondOrder",
    "DanglingBond",
    "EmptyInput",
    "Failure",
    "FailureReason",
    "MolGraph",
    "RingBondConflict",
    "SmilesError",
    "Token",
    "TokenKind",
    "UnbalancedBranch",
    "UnclosedRingBond",
    "UnknownCharacter",
    "UnsupportedElement",
    "ValidityReport",
    "assign_implicit_hydrogens",
    "is_valid",
    "morgan_ranks",
    "parse",
    "parse_smiles",
    "read_smiles",
    "tokenize",
    "validate",
    "write",
]
