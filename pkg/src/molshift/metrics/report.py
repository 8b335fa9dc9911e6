"""Per-pair records, aggregate metrics, and the evaluation driver."""

import csv
import math
from dataclasses import dataclass

from ..chemprops import content_properties, match_alerts
from ..smiles import SmilesError, read_smiles
from ..smiles.valence import validate
from .scoring import NegativeFactor, TaskSpec, pss

CSV_COLUMNS = (
    "input_smiles",
    "output_smiles",
    "prop_x",
    "prop_y",
    "imp",
    "pss",
    "valid",
    "success",
)


class EmptyTestSet(ValueError):
    pass


def success(x_graph, y_graph, task: TaskSpec, scales: dict[str, float]) -> bool:
    """Style condition on the output AND content similarity above the
    task threshold."""
    if not task.style_success(task.score(y_graph)):
        return False
    x_props = content_properties(x_graph)
    y_props = content_properties(y_graph)
    return pss(x_props, y_props, scales) > task.pss_threshold


def gm(mean_imp: float, mean_pss: float, sr: float) -> float:
    """Geometric mean of the three headline numbers."""
    for name, value in (("imp", mean_imp), ("pss", mean_pss), ("sr", sr)):
        if value < 0:
            raise NegativeFactor(f"{name} = {value} < 0")
    return (mean_imp * mean_pss * sr) ** (1.0 / 3.0)


def alert_rate(graphs, alerts=None) -> float:
    """Percentage of molecules matching at least one structural alert."""
    graphs = list(graphs)
    if not graphs:
        return 0.0
    hits = sum(1 for g in graphs if match_alerts(g, alerts))
    return 100.0 * hits / len(graphs)


@dataclass(frozen=True)
class PairRecord:
    input_smiles: str
    output_smiles: str
    prop_x: float
    prop_y: float | None  # None when the output failed to parse/validate
    imp: float | None
    pss: float | None
    valid: bool
    success: bool


@dataclass(frozen=True)
class MetricsReport:
    records: tuple[PairRecord, ...]
    mean_imp: float
    mean_pss: float
    validity: float
    sr: float
    gm: float
    alert_pct: float | None = None


def report_from_pairs(
    pairs: list[tuple[str, str | None]],
    task: TaskSpec,
    scales: dict[str, float],
    alerts=None,
) -> MetricsReport:
    """Score (input, output) SMILES pairs and fold them into aggregates.

    Mean improvement and mean PSS run over valid outputs only; validity
    and success rate run over all pairs (an invalid output never counts
    as a success).
    """
    if not pairs:
        raise EmptyTestSet("no pairs to evaluate")
    records = []
    out_graphs = []
    for x_smiles, y_smiles in pairs:
        x_graph = read_smiles(x_smiles)
        prop_x = task.score(x_graph)
        y_graph = None
        if y_smiles is not None:
            try:
                candidate = read_smiles(y_smiles)
            except SmilesError:
                candidate = None
            if candidate is not None and validate(candidate).valid:
                y_graph = candidate
        if y_graph is None:
            records.append(
                PairRecord(x_smiles, y_smiles or "", prop_x, None, None, None,
                           valid=False, success=False)
            )
            continue
        out_graphs.append(y_graph)
        prop_y = task.score(y_graph)
        pair_pss = pss(content_properties(x_graph), content_properties(y_graph), scales)
        ok = task.style_success(prop_y) and pair_pss > task.pss_threshold
        records.append(
            PairRecord(x_smiles, y_smiles, prop_x, prop_y, prop_x - prop_y,
                       pair_pss, valid=True, success=ok)
        )

    valid_records = [r for r in records if r.valid]
    mean_imp = (
        math.fsum(r.imp for r in valid_records) / len(valid_records)
        if valid_records else 0.0
    )
    mean_pss = (
        math.fsum(r.pss for r in valid_records) / len(valid_records)
        if valid_records else 0.0
    )
    validity = 100.0 * len(valid_records) / len(records)
    sr = sum(r.success for r in records) / len(records)
    try:
        overall_gm = gm(mean_imp, mean_pss, sr)
    except NegativeFactor:
        overall_gm = float("nan")
    alert_pct = alert_rate(out_graphs, alerts) if out_graphs else None
    return MetricsReport(
        records=tuple(records),
        mean_imp=mean_imp,
        mean_pss=mean_pss,
        validity=validity,
        sr=sr,
        gm=overall_gm,
        alert_pct=alert_pct,
    )


def csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_report_csv(report: MetricsReport, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in report.records:
            writer.writerow([csv_cell(getattr(r, col)) for col in CSV_COLUMNS])


def summary_lines(report: MetricsReport) -> list[str]:
    lines = [
        f"imp={report.mean_imp!r}",
        f"pss={report.mean_pss!r}",
        f"validity={report.validity!r}",
        f"sr={report.sr!r}",
        f"gm={report.gm!r}",
    ]
    if report.alert_pct is not None:
        lines.append(f"alert_rate={report.alert_pct!r}")
    return lines


def evaluate(
    test_smiles: list[str],
    bundle,
    task: TaskSpec,
    scales: dict[str, float],
    target_pool: list[str],
    seed: int = 0,
    csv_path=None,
    alerts=None,
) -> MetricsReport:
    """Run transfer on each test molecule and assemble the report."""
    # late import: transfer depends on pss from this package
    from ..transfer import encode_pool, transfer_molecule

    if not test_smiles:
        raise EmptyTestSet("no test molecules")
    pool_latents = encode_pool(bundle.model, target_pool)
    pairs = []
    for i, smiles in enumerate(test_smiles):
        result = transfer_molecule(
            smiles, target_pool, bundle, task, scales, seed=seed + i,
            pool_latents=pool_latents,
        )
        pairs.append((smiles, result.best_smiles))
    report = report_from_pairs(pairs, task, scales, alerts=alerts)
    if csv_path is not None:
        write_report_csv(report, csv_path)
    return report
