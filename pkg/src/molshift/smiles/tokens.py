"""SMILES tokenizer.

Splits a SMILES string into atom, bond, ring-closure, branch and dot tokens.
Token texts are exact slices of the input, so joining them in order
reproduces the string. Two-letter organic-subset elements (Cl, Br) are kept
whole, bracket expressions are single tokens, and %nn ring closures consume
all three characters.
"""

from dataclasses import dataclass
from enum import Enum

from .errors import EmptyInput, UnknownCharacter


class TokenKind(Enum):
    ATOM = "atom"
    BRACKET_ATOM = "bracket_atom"
    BOND = "bond"
    RING_CLOSURE = "ring_closure"
    BRANCH_OPEN = "branch_open"
    BRANCH_CLOSE = "branch_close"
    DOT = "dot"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    pos: int


# Organic-subset atoms writable without brackets. Two-letter symbols first
# so the scanner prefers them over their one-letter prefixes.
TWO_LETTER_ATOMS = ("Cl", "Br")
ONE_LETTER_ATOMS = frozenset("BCNOPSFI")
AROMATIC_ATOMS = frozenset("bcnops")
BOND_CHARS = frozenset("-=#:/\\")


def tokenize(smiles: str) -> list[Token]:
    """Tokenize a SMILES string.

    Raises EmptyInput for an empty string and UnknownCharacter (with its
    position) for anything outside the supported alphabet.
    """
    if not smiles:
        raise EmptyInput()
    tokens = []
    i = 0
    n = len(smiles)
    while i < n:
        ch = smiles[i]
        if ch == "[":
            end = smiles.find("]", i + 1)
            if end < 0:
                raise UnknownCharacter(i, ch)
            tokens.append(Token(TokenKind.BRACKET_ATOM, smiles[i : end + 1], i))
            i = end + 1
        elif ch == "%":
            if i + 2 < n and smiles[i + 1].isdigit() and smiles[i + 2].isdigit():
                tokens.append(Token(TokenKind.RING_CLOSURE, smiles[i : i + 3], i))
                i += 3
            else:
                raise UnknownCharacter(i, ch)
        elif ch.isdigit():
            tokens.append(Token(TokenKind.RING_CLOSURE, ch, i))
            i += 1
        elif smiles[i : i + 2] in TWO_LETTER_ATOMS:
            tokens.append(Token(TokenKind.ATOM, smiles[i : i + 2], i))
            i += 2
        elif ch in ONE_LETTER_ATOMS or ch in AROMATIC_ATOMS:
            tokens.append(Token(TokenKind.ATOM, ch, i))
            i += 1
        elif ch in BOND_CHARS:
            tokens.append(Token(TokenKind.BOND, ch, i))
            i += 1
        elif ch == "(":
            tokens.append(Token(TokenKind.BRANCH_OPEN, ch, i))
            i += 1
        elif ch == ")":
            tokens.append(Token(TokenKind.BRANCH_CLOSE, ch, i))
            i += 1
        elif ch == ".":
            tokens.append(Token(TokenKind.DOT, ch, i))
            i += 1
        else:
            raise UnknownCharacter(i, ch)
    return tokens


def ring_label(token: Token) -> int:
    """Numeric label of a ring-closure token ('3' -> 3, '%12' -> 12)."""
    text = token.text
    return int(text[1:]) if text.startswith("%") else int(text)
