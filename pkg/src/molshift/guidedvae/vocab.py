"""Token vocabulary shared by the sequence models.

Tokens are the lexer's surface strings (one per atom, bracket atom, bond,
digit, paren or dot), plus pad/start/end specials. Index order is frozen
at build time so checkpoints can detect vocabulary drift.
"""

from dataclasses import dataclass

from ..smiles import tokenize

PAD, BOS, EOS = "<pad>", "<bos>", "<eos>"


class OutOfVocabularyToken(KeyError):
    def __init__(self, token: str):
        super().__init__(token)
        self.token = token


@dataclass(frozen=True)
class Vocabulary:
    tokens: tuple[str, ...]  # full list, specials first

    def __post_init__(self):
        assert self.tokens[:3] == (PAD, BOS, EOS), "specials must lead the vocabulary"

    @property
    def index(self) -> dict[str, int]:
        # tiny, rebuilt on demand; dataclass stays hashable/serializable
        return {t: i for i, t in enumerate(self.tokens)}

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def pad_id(self) -> int:
        return 0

    @property
    def bos_id(self) -> int:
        return 1

    @property
    def eos_id(self) -> int:
        return 2

    def encode(self, smiles: str) -> list[int]:
        index = self.index
        ids = [self.bos_id]
        for token in tokenize(smiles):
            if token.text not in index:
                raise OutOfVocabularyToken(token.text)
            ids.append(index[token.text])
        ids.append(self.eos_id)
        return ids

    def decode(self, ids: list[int]) -> str:
        pieces = []
        for i in ids:
            if i in (self.pad_id, self.bos_id):
                continue
            if i == self.eos_id:
                break
            pieces.append(self.tokens[i])
        return "".join(pieces)

    @classmethod
    def build(cls, corpus: list[str]) -> "Vocabulary":
        seen = set()
        for smiles in corpus:
            for token in tokenize(smiles):
                seen.add(token.text)
        return cls(tokens=(PAD, BOS, EOS, *sorted(seen)))
