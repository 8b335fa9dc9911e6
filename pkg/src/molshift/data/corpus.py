"""Corpus ingestion, labeling, persistence, and splitting."""

import csv
import hashlib
import json
import logging
import random
from dataclasses import dataclass, field
from pathlib import Path

from ..chemprops import PropertyVector, content_properties
from ..metrics import TaskSpec
from ..smiles import SmilesError, read_smiles
from ..smiles.valence import validate

log = logging.getLogger(__name__)

CSV_HEADER = (
    "smiles", "mw", "logp", "hba", "hbd", "rot", "rings", "charge",
    "tpsa", "tox", "sa", "pool",
)


class AllInvalid(ValueError):
    pass


class PoolTooSmall(ValueError):
    pass


@dataclass(frozen=True)
class CorpusRecord:
    smiles: str
    props: PropertyVector
    tox: float
    sa: float
    pool: str  # source | target | neither

    def row(self) -> list[str]:
        p = self.props
        return [
            self.smiles, repr(p.mw), repr(p.logp), str(p.hba), str(p.hbd),
            str(p.rot_bonds), str(p.rings), str(p.net_charge), repr(p.tpsa),
            repr(self.tox), repr(self.sa), self.pool,
        ]


@dataclass(frozen=True)
class LabeledCorpus:
    records: tuple[CorpusRecord, ...]
    provenance: dict = field(default_factory=dict)

    def pool(self, label: str) -> list[CorpusRecord]:
        return [r for r in self.records if r.pool == label]

    def corpus_hash(self) -> str:
        digest = hashlib.sha256()
        for record in self.records:
            digest.update(",".join(record.row()).encode())
            digest.update(b"\n")
        return digest.hexdigest()

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_HEADER)
            for record in self.records:
                writer.writerow(record.row())
        meta = Path(str(path) + ".meta.json")
        meta.write_text(json.dumps(
            {"hash": self.corpus_hash(), **self.provenance},
            indent=2, sort_keys=True,
        ))

    @classmethod
    def from_csv(cls, path) -> "LabeledCorpus":
        records = []
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if tuple(header) != CSV_HEADER:
                raise ValueError(f"unexpected corpus header: {header}")
            for row in reader:
                props = PropertyVector(
                    mw=float(row[1]), logp=float(row[2]), hba=int(row[3]),
                    hbd=int(row[4]), rot_bonds=int(row[5]), rings=int(row[6]),
                    net_charge=int(row[7]), tpsa=float(row[8]),
                )
                records.append(CorpusRecord(
                    smiles=row[0], props=props, tox=float(row[9]),
                    sa=float(row[10]), pool=row[11],
                ))
        provenance = {}
        meta = Path(str(path) + ".meta.json")
        if meta.exists():
            provenance = json.loads(meta.read_text())
        return cls(records=tuple(records), provenance=provenance)


def ingest(path, task: TaskSpec, tox_scorer, sa_scorer) -> LabeledCorpus:
    """Parse a SMILES-per-line file, drop invalid entries with a logged
    reason, score each molecule, and assign pool labels from the task's
    thresholds applied to the matching score column."""
    text = Path(path).read_text()
    records = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        smiles = line.split()[0] if line.split() else ""
        if not smiles:
            continue
        try:
            graph = read_smiles(smiles)
        except SmilesError as exc:
            log.info("line %d dropped (%s): %s", lineno, exc, smiles)
            continue
        report = validate(graph)
        if not report.valid:
            log.info("line %d dropped (valence): %s", lineno, smiles)
            continue
        tox = float(tox_scorer(graph))
        sa = float(sa_scorer(graph))
        style_score = tox if task.name == "toxicity" else sa
        records.append(CorpusRecord(
            smiles=smiles, props=content_properties(graph), tox=tox, sa=sa,
            pool=task.label(style_score),
        ))
    if not records:
        raise AllInvalid(f"no valid molecules in {path}")
    provenance = {
        "file_hash": hashlib.sha256(text.encode()).hexdigest(),
        "task": task.name,
    }
    return LabeledCorpus(records=tuple(records), provenance=provenance)


@dataclass(frozen=True)
class SplitSpec:
    train: float = 0.85
    dev: float = 0.05
    test: float = 0.10
    seed: int = 0

    def __post_init__(self):
        assert abs(self.train + self.dev + self.test - 1.0) < 1e-9


def split(items, spec: SplitSpec) -> tuple[list, list, list]:
    """Deterministic shuffled partition into train/dev/test."""
    items = list(items)
    order = list(range(len(items)))
    random.Random(spec.seed).shuffle(order)
    n = len(items)
    n_train = int(round(spec.train * n))
    n_dev = int(round(spec.dev * n))
    train = [items[i] for i in order[:n_train]]
    dev = [items[i] for i in order[n_train:n_train + n_dev]]
    test = [items[i] for i in order[n_train + n_dev:]]
    return train, dev, test


def sample_style_instances(pool, k: int, exclude=None, seed: int = 0) -> list:
    """K distinct style exemplars, never including the reference item."""
    candidates = [item for item in pool if item != exclude]
    if len(candidates) < k:
        raise PoolTooSmall(f"need {k} instances, pool has {len(candidates)}")
    if len(candidates) == k:
        return list(candidates)
    return random.Random(seed).sample(candidates, k)
