"""Molecular property stack: content properties, fingerprints,
synthetic-accessibility score, structural alerts, toxicity surrogate."""

from .alerts import AlertPattern, bundled_alerts, match_alerts, parse_alert_file
from .fingerprint import (
    DEFAULT_RADIUS,
    DEFAULT_WIDTH,
    Fingerprint,
    circular_fingerprint,
)
from .properties import (
    PropertyVector,
    atomic_weights,
    content_properties,
    log_p,
    molecular_weight,
    ring_count,
    rotatable_bonds,
    tpsa,
)
from .sascore import (
    EmptyTable,
    FragmentFreqTable,
    build_fragment_table,
    complexity_penalty,
    sa_score,
)
from .tox import (
    DegenerateLabels,
    ToxModel,
    ToxTrainConfig,
    auroc,
    predict_tox,
    train_tox_predictor,
)

__all__ = [
    "AlertPattern",
    "DEFAULT_RADIUS",
    "DEFAULT_WIDTH",
    "DegenerateLabels",
    "EmptyTable",
    "Fingerprint",
    "FragmentFreqTable",
    "PropertyVector",
    "ToxModel",
    "ToxTrainConfig",
    "atomic_weights",
    "auroc",
    "build_fragment_table",
    "bundled_alerts",
    "circular_fingerprint",
    "complexity_penalty",
    "content_properties",
    "log_p",
    "match_alerts",
    "molecular_weight",
    "parse_alert_file",
    "predict_tox",
    "ring_count",
    "rotatable_bonds",
    "sa_score",
    "tpsa",
    "train_tox_predictor",
]
