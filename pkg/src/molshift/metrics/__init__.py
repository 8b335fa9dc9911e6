"""Evaluation metrics: improvement, physicochemical similarity, validity,
success rate, geometric mean, and alert rate."""

from .report import (
    CSV_COLUMNS,
    EmptyTestSet,
    MetricsReport,
    PairRecord,
    alert_rate,
    csv_cell,
    evaluate,
    gm,
    report_from_pairs,
    success,
    summary_lines,
    write_report_csv,
)
from .scoring import (
    PSS_FLOOR,
    SCALE_FLOOR,
    Interval,
    NegativeFactor,
    ScoringFailure,
    TaskSpec,
    improvement,
    property_scales,
    pss,
    synthesizability_task,
    toxicity_task,
    validity_rate,
)

__all__ = [
    "CSV_COLUMNS",
    "EmptyTestSet",
    "Interval",
    "MetricsReport",
    "NegativeFactor",
    "PairRecord",
    "PSS_FLOOR",
    "SCALE_FLOOR",
    "ScoringFailure",
    "TaskSpec",
    "alert_rate",
    "csv_cell",
    "evaluate",
    "gm",
    "improvement",
    "property_scales",
    "pss",
    "report_from_pairs",
    "success",
    "summary_lines",
    "synthesizability_task",
    "toxicity_task",
    "validity_rate",
    "write_report_csv",
]
