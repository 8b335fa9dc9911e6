"""Corpus tooling: generation, ingestion, labeling, splits, sampling."""

from .corpus import (
    CSV_HEADER,
    AllInvalid,
    CorpusRecord,
    LabeledCorpus,
    PoolTooSmall,
    SplitSpec,
    ingest,
    sample_style_instances,
    split,
)
from .generator import EASY_CORES, HARD_CORES, SUBSTITUENTS, make_desk_corpus

__all__ = [
    "AllInvalid",
    "CSV_HEADER",
    "CorpusRecord",
    "EASY_CORES",
    "HARD_CORES",
    "LabeledCorpus",
    "PoolTooSmall",
    "SUBSTITUENTS",
    "SplitSpec",
    "ingest",
    "make_desk_corpus",
    "sample_style_instances",
    "split",
]
