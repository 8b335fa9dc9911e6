"""Errors raised by SMILES lexing and parsing."""


class SmilesError(ValueError):
    """Base class for tokenizer and parser failures."""


class EmptyInput(SmilesError):
    def __init__(self):
        super().__init__("empty SMILES input")


class UnknownCharacter(SmilesError):
    def __init__(self, position: int, char: str):
        self.position = position
        self.char = char
        super().__init__(f"unknown character {char!r} at position {position}")


class UnbalancedBranch(SmilesError):
    def __init__(self, position: int):
        self.position = position
        super().__init__(f"unbalanced branch at position {position}")


class UnclosedRingBond(SmilesError):
    def __init__(self, label: int):
        self.label = label
        super().__init__(f"ring bond {label} never closed")


class DanglingBond(SmilesError):
    def __init__(self, position: int):
        self.position = position
        super().__init__(f"bond symbol at position {position} has no following atom")


class UnsupportedElement(SmilesError):
    def __init__(self, symbol: str, position: int = -1):
        self.symbol = symbol
        self.position = position
        super().__init__(f"element {symbol!r} is not in the supported element table")


class RingBondConflict(SmilesError):
    """Ring opening and closing carry contradictory bond symbols, or the
    closure would create a self-loop or duplicate bond."""

    def __init__(self, label: int, reason: str):
        self.label = label
        super().__init__(f"ring bond {label}: {reason}")
