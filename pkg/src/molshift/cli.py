"""Command-line entry point wiring the corpus, model, and evaluation stages.

Subcommands cover the full workflow: corpus generation and ingestion,
sequence-model pretraining, transfer training, transfer and evaluation
runs, property scoring, and static figures.  Logs go to stderr, data to
files under the run's output directory.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import logging
import os
import sys
import typing
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

log = logging.getLogger("molshift.cli")

EXIT_OK = 0
EXIT_BAD_CONFIG = 2
EXIT_MISSING_ARTIFACT = 3
EXIT_TRAINING_ABORTED = 4
EXIT_SCORING_FAILURE = 5

CONFIG_ENV_VAR = "MOLSHIFT_CONFIG"
RESOLVED_CONFIG_NAME = "config.resolved.json"
LOCK_NAME = ".lock"

EXIT_CODE_DOC = """\
exit codes:
  0  success
  2  bad config (unknown keys, wrong types, held output-directory lock)
  3  missing artifact (input file or checkpoint not found)
  4  training aborted (non-finite loss, empty corpus or pool)
  5  scoring failure (unscorable molecule or metric breakdown)

The default config path is read from the environment variable
MOLSHIFT_CONFIG when --config is not given.  Flags mirror config keys
as --section-key; flags win over the config file.  Every run writes the
resolved config and content hashes of its inputs next to its outputs.
"""


class BadConfig(ValueError):
    """Config file or flag value failed validation."""


class MissingCheckpoint(FileNotFoundError):
    """A required input file or model checkpoint does not exist."""


class LockHeld(BadConfig):
    def __init__(self, out_dir: Path):
        super().__init__(
            f"output directory {out_dir} is owned by another run "
            f"(remove {out_dir / LOCK_NAME} if that run is dead)"
        )


# ------------------------------------------------------------------- config


@dataclass(frozen=True)
class ModelSection:
    embed: int = 512
    hidden: int = 512
    rnn_layers: int = 3
    latent: int = 128
    kl_weight: float = 0.05
    max_len: int = 120
    epochs: int = 10
    batch_size: int = 64
    lr: float = 1e-3


@dataclass(frozen=True)
class TransferSection:
    style_instances: int = 10
    flow_steps: int = 6
    disc_per_gen: int = 5
    decode_count: int = 10
    gp_weight: float = 10.0
    w_style: float = 1.0
    w_recon: float = 1.0
    w_cycle: float = 1.0
    iterations: int = 2000
    batch_size: int = 32
    lr: float = 1e-4
    pss_floor: float = 0.7
    hidden: int = 256


@dataclass(frozen=True)
class PathsSection:
    corpus: str | None = None
    labeled: str | None = None
    vae_checkpoint: str | None = None
    transfer_checkpoint: str | None = None
    sa_table: str | None = None
    tox_model: str | None = None
    out_dir: str = "runs/latest"


@dataclass(frozen=True)
class RunConfig:
    task: str = "synthesizability"
    seed: int = 0
    model: ModelSection = field(default_factory=ModelSection)
    transfer: TransferSection = field(default_factory=TransferSection)
    paths: PathsSection = field(default_factory=PathsSection)

    def to_dict(self) -> dict:
        return {
            "task": self.task,
            "seed": self.seed,
            "model": dataclasses.asdict(self.model),
            "transfer": dataclasses.asdict(self.transfer),
            "paths": dataclasses.asdict(self.paths),
        }


_SECTIONS = {"model": ModelSection, "transfer": TransferSection, "paths": PathsSection}
_TASK_ALIASES = {"sa": "synthesizability", "synthesizability": "synthesizability",
                 "toxicity": "toxicity"}


def _coerce(name: str, value, annotation):
    """Validate a config value against a field annotation; no silent casts
    beyond int -> float."""
    options = typing.get_args(annotation) or (annotation,)
    if value is None and type(None) in options:
        return None
    if annotation is float and isinstance(value, int) and not isinstance(value, bool):
        return float(value)
    if isinstance(value, bool) or not isinstance(
        value, tuple(o for o in options if o is not type(None))
    ):
        raise BadConfig(f"{name}: expected {annotation}, got {value!r}")
    return value


def _section_from_dict(cls, mapping: dict, where: str):
    hints = typing.get_type_hints(cls)
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = set(mapping) - known
    if unknown:
        raise BadConfig(f"unknown keys in {where}: {sorted(unknown)}")
    return cls(**{
        key: _coerce(f"{where}.{key}", value, hints[key])
        for key, value in mapping.items()
    })


def load_config(path: str | Path | None) -> RunConfig:
    """Parse the JSON run config; unknown keys anywhere are rejected."""
    if path is None:
        return RunConfig()
    try:
        raw = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise MissingCheckpoint(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise BadConfig(f"config is not valid JSON: {exc}")
    if not isinstance(raw, dict):
        raise BadConfig("config root must be an object")
    unknown = set(raw) - {"task", "seed", *_SECTIONS}
    if unknown:
        raise BadConfig(f"unknown top-level keys: {sorted(unknown)}")
    sections = {}
    for name, cls in _SECTIONS.items():
        body = raw.get(name, {})
        if not isinstance(body, dict):
            raise BadConfig(f"{name} must be an object")
        sections[name] = _section_from_dict(cls, body, name)
    return RunConfig(
        task=_normalize_task(raw.get("task", "synthesizability")),
        seed=_coerce("seed", raw.get("seed", 0), int),
        **sections,
    )


def _normalize_task(value) -> str:
    if not isinstance(value, str) or value not in _TASK_ALIASES:
        raise BadConfig(
            f"task must be one of {sorted(_TASK_ALIASES)}, got {value!r}"
        )
    return _TASK_ALIASES[value]


def apply_overrides(config: RunConfig, args: argparse.Namespace) -> RunConfig:
    """Fold --section-key flags (and --task/--seed) over the file config."""
    if getattr(args, "task", None) is not None:
        config = dataclasses.replace(config, task=_normalize_task(args.task))
    if getattr(args, "seed", None) is not None:
        config = dataclasses.replace(config, seed=args.seed)
    for section, cls in _SECTIONS.items():
        changes = {}
        for f in dataclasses.fields(cls):
            value = getattr(args, f"{section}.{f.name}", None)
            if value is not None:
                changes[f.name] = value
        if changes:
            config = dataclasses.replace(
                config, **{section: dataclasses.replace(getattr(config, section), **changes)}
            )
    return config


# ------------------------------------------------------- run-dir provenance


def content_hash(path: str | Path) -> str:
    """Git-style blob hash of a file's bytes."""
    data = Path(path).read_bytes()
    return hashlib.sha1(b"blob %d\x00" % len(data) + data).hexdigest()


def write_resolved_config(
    out_dir: Path, command: str, config: RunConfig, inputs: dict[str, str]
) -> None:
    payload = {"command": command, "inputs": inputs, **config.to_dict()}
    path = out_dir / RESOLVED_CONFIG_NAME
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


@contextmanager
def own_directory(out_dir: Path):
    """Create the run directory and hold its lockfile for the whole run."""
    out_dir.mkdir(parents=True, exist_ok=True)
    lock = out_dir / LOCK_NAME
    try:
        fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise LockHeld(out_dir)
    try:
        os.write(fd, f"{os.getpid()}\n".encode())
        os.close(fd)
        yield out_dir
    finally:
        lock.unlink(missing_ok=True)


def _require(path: str | None, what: str) -> Path:
    if not path:
        raise MissingCheckpoint(f"no {what} configured (set the path or flag)")
    p = Path(path)
    if not p.exists():
        raise MissingCheckpoint(f"{what} not found: {p}")
    return p


def _read_smiles_lines(path: Path) -> list[str]:
    return [line.strip() for line in path.read_text().splitlines() if line.strip()]


# ------------------------------------------------------------ task assembly


def _load_sa_table(config: RunConfig, fallback_graphs=None):
    """Fragment table from config, from a sibling of the labeled corpus,
    or self-calibrated on the given graphs as a last resort."""
    from .chemprops import FragmentFreqTable, build_fragment_table

    if config.paths.sa_table:
        return FragmentFreqTable.from_json(
            _require(config.paths.sa_table, "fragment table").read_text()
        )
    if config.paths.labeled:
        sibling = Path(config.paths.labeled).parent / "sa_table.json"
        if sibling.exists():
            return FragmentFreqTable.from_json(sibling.read_text())
    if fallback_graphs:
        log.warning("no fragment table configured; calibrating on the input set")
        return build_fragment_table(fallback_graphs, seed=config.seed)
    raise MissingCheckpoint(
        "no fragment table (run ingest first or set paths.sa_table)"
    )


def _tox_scorer(config: RunConfig):
    """Trained surrogate when configured, alert-count heuristic otherwise."""
    from .chemprops import ToxModel, bundled_alerts, match_alerts, predict_tox

    if config.paths.tox_model:
        model = ToxModel.from_json(
            _require(config.paths.tox_model, "toxicity model").read_text()
        )
        return lambda graph: predict_tox(model, graph)
    alerts = bundled_alerts()
    return lambda graph: min(1.0, len(match_alerts(graph, alerts)) / 2.0)


def _build_task(config: RunConfig, sa_table):
    from .chemprops import sa_score
    from .metrics import synthesizability_task, toxicity_task

    if config.task == "toxicity":
        return toxicity_task(_tox_scorer(config))
    return synthesizability_task(lambda graph: sa_score(graph, sa_table))


def _load_bundle(config: RunConfig):
    from .guidedvae import load_checkpoint
    from .transfer import TransferBundle, load_transfer_checkpoint

    vae_path = _require(config.paths.vae_checkpoint, "sequence-model checkpoint")
    model, _, _ = load_checkpoint(vae_path, frozen=True)
    transfer_path = _require(
        config.paths.transfer_checkpoint, "transfer checkpoint"
    )
    generator, flow, _, transfer_config, _ = load_transfer_checkpoint(
        transfer_path, expected_vae_hash=model.parameter_hash()
    )
    bundle = TransferBundle(
        model=model, generator=generator, flow=flow, config=transfer_config
    )
    return bundle, vae_path, transfer_path


def _corpus_pools(config: RunConfig):
    from .data import LabeledCorpus

    labeled_path = _require(config.paths.labeled, "labeled corpus")
    corpus = LabeledCorpus.from_csv(labeled_path)
    return corpus, labeled_path


# ---------------------------------------------------------------- commands


def cmd_gen(config: RunConfig, args, out_dir: Path) -> int:
    from .data import make_desk_corpus

    path = Path(config.paths.corpus or out_dir / "corpus.smi")
    path.parent.mkdir(parents=True, exist_ok=True)
    corpus = make_desk_corpus(size=args.size, seed=config.seed, path=path)
    write_resolved_config(out_dir, "gen", config, {str(path): content_hash(path)})
    log.info("wrote %d molecules to %s", len(corpus), path)
    return EXIT_OK


def cmd_ingest(config: RunConfig, args, out_dir: Path) -> int:
    from .chemprops import build_fragment_table, sa_score
    from .data import ingest
    from .smiles import SmilesError, read_smiles

    corpus_path = _require(config.paths.corpus, "corpus file")
    graphs = []
    for line in _read_smiles_lines(corpus_path):
        try:
            graphs.append(read_smiles(line))
        except SmilesError:
            continue  # ingest() logs the drop
    table = build_fragment_table(graphs, seed=config.seed)
    table_path = out_dir / "sa_table.json"
    table_path.write_text(table.to_json())

    task = _build_task(
        dataclasses.replace(
            config, paths=dataclasses.replace(config.paths, sa_table=str(table_path))
        ),
        table,
    )
    corpus = ingest(
        corpus_path,
        task,
        _tox_scorer(config),
        lambda graph: sa_score(graph, table),
    )
    labeled_path = Path(config.paths.labeled or out_dir / "corpus.labeled.csv")
    labeled_path.parent.mkdir(parents=True, exist_ok=True)
    corpus.to_csv(labeled_path)
    write_resolved_config(
        out_dir, "ingest", config, {str(corpus_path): content_hash(corpus_path)}
    )
    n_source = len(corpus.pool("source"))
    n_target = len(corpus.pool("target"))
    log.info(
        "labeled %d molecules (%d source, %d target) -> %s",
        len(corpus.records), n_source, n_target, labeled_path,
    )
    return EXIT_OK


def cmd_pretrain(config: RunConfig, args, out_dir: Path) -> int:
    from .guidedvae import (
        PretrainConfig,
        VAEConfig,
        Vocabulary,
        pretrain,
        save_checkpoint,
    )

    corpus_path = _require(config.paths.corpus, "corpus file")
    corpus = _read_smiles_lines(corpus_path)
    m = config.model
    vae_config = VAEConfig(
        vocab=Vocabulary.build(corpus),
        token_embed_dim=m.embed,
        hidden_dim=m.hidden,
        rnn_layers=m.rnn_layers,
        latent_dim=m.latent,
        kl_weight=m.kl_weight,
        max_len=m.max_len,
    )
    result = pretrain(
        corpus,
        vae_config,
        PretrainConfig(
            epochs=m.epochs,
            batch_size=m.batch_size,
            lr=m.lr,
            seed=config.seed,
            checkpoint_dir=str(out_dir / "checkpoints"),
            log_path=str(out_dir / "pretrain_log.csv"),
        ),
    )
    final_path = Path(config.paths.vae_checkpoint or out_dir / "vae.pt")
    final_path.parent.mkdir(parents=True, exist_ok=True)
    save_checkpoint(
        final_path,
        result.model,
        result.specs,
        metadata={"parameter_hash": result.parameter_hash},
    )
    write_resolved_config(
        out_dir, "pretrain", config, {str(corpus_path): content_hash(corpus_path)}
    )
    log.info(
        "pretrained on %d molecules; parameter hash %s; checkpoint %s",
        len(corpus), result.parameter_hash[:12], final_path,
    )
    return EXIT_OK


def cmd_train(config: RunConfig, args, out_dir: Path) -> int:
    from .guidedvae import load_checkpoint
    from .transfer import TransferConfig, train

    corpus, labeled_path = _corpus_pools(config)
    vae_path = _require(config.paths.vae_checkpoint, "sequence-model checkpoint")
    model, _, _ = load_checkpoint(vae_path, frozen=True)
    t = config.transfer
    transfer_config = TransferConfig(
        style_instances=t.style_instances,
        disc_per_gen=t.disc_per_gen,
        gp_weight=t.gp_weight,
        w_style=t.w_style,
        w_recon=t.w_recon,
        w_cycle=t.w_cycle,
        iterations=t.iterations,
        batch_size=t.batch_size,
        lr=t.lr,
        hidden=t.hidden,
        flow_steps=t.flow_steps,
        decode_count=t.decode_count,
        pss_floor=t.pss_floor,
        seed=config.seed,
        checkpoint_dir=str(out_dir),
    )
    source = [r.smiles for r in corpus.pool("source")]
    target = [r.smiles for r in corpus.pool("target")]
    result = train(source, target, model, transfer_config)
    write_resolved_config(
        out_dir, "train", config,
        {
            str(labeled_path): content_hash(labeled_path),
            str(vae_path): content_hash(vae_path),
        },
    )
    log.info(
        "trained on %d source / %d target molecules; %d disc / %d gen updates; "
        "checkpoint %s",
        len(source), len(target), result.disc_updates, result.gen_updates,
        result.checkpoint_path,
    )
    return EXIT_OK


TRANSFER_COLUMNS = (
    "input_smiles", "output_smiles", "prop_before", "prop_after",
    "pss", "success", "candidates",
)


def cmd_transfer(config: RunConfig, args, out_dir: Path) -> int:
    import csv

    from .metrics import csv_cell, property_scales
    from .smiles import read_smiles
    from .transfer import encode_pool, transfer_molecule

    input_path = _require(args.input, "input SMILES file")
    test_smiles = _read_smiles_lines(input_path)
    corpus, labeled_path = _corpus_pools(config)
    table = _load_sa_table(config)
    task = _build_task(config, table)
    bundle, vae_path, transfer_path = _load_bundle(config)
    scales = property_scales([r.props for r in corpus.records])
    target_pool = [r.smiles for r in corpus.pool("target")]
    pool_latents = encode_pool(bundle.model, target_pool)

    out_path = out_dir / "transfer_output.csv"
    with open(out_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRANSFER_COLUMNS)
        for i, smiles in enumerate(test_smiles):
            result = transfer_molecule(
                smiles, target_pool, bundle, task, scales,
                seed=config.seed + i, pool_latents=pool_latents,
            )
            before = task.score(read_smiles(smiles))
            after = (
                task.score(read_smiles(result.best_smiles))
                if result.best_smiles else None
            )
            writer.writerow([
                csv_cell(value) for value in (
                    smiles, result.best_smiles, before, after,
                    result.best_pss, result.success, len(result.candidates),
                )
            ])
    write_resolved_config(
        out_dir, "transfer", config,
        {
            str(input_path): content_hash(input_path),
            str(labeled_path): content_hash(labeled_path),
            str(vae_path): content_hash(vae_path),
            str(transfer_path): content_hash(transfer_path),
        },
    )
    log.info("transferred %d molecules -> %s", len(test_smiles), out_path)
    return EXIT_OK


def cmd_eval(config: RunConfig, args, out_dir: Path) -> int:
    from .chemprops import bundled_alerts
    from .metrics import evaluate, property_scales, summary_lines

    input_path = _require(args.input, "test-set SMILES file")
    test_smiles = _read_smiles_lines(input_path)
    corpus, labeled_path = _corpus_pools(config)
    table = _load_sa_table(config)
    task = _build_task(config, table)
    bundle, vae_path, transfer_path = _load_bundle(config)
    scales = property_scales([r.props for r in corpus.records])
    target_pool = [r.smiles for r in corpus.pool("target")]

    csv_path = out_dir / "report.csv"
    report = evaluate(
        test_smiles, bundle, task, scales, target_pool,
        seed=config.seed, csv_path=csv_path, alerts=bundled_alerts(),
    )
    lines = summary_lines(report)
    (out_dir / "report.summary.txt").write_text("\n".join(lines) + "\n")
    write_resolved_config(
        out_dir, "eval", config,
        {
            str(input_path): content_hash(input_path),
            str(labeled_path): content_hash(labeled_path),
            str(vae_path): content_hash(vae_path),
            str(transfer_path): content_hash(transfer_path),
        },
    )
    for line in lines:
        log.info("%s", line)
    log.info("report -> %s", csv_path)
    return EXIT_OK


PROPS_COLUMNS = (
    "smiles", "mw", "logp", "hba", "hbd", "rot_bonds", "rings",
    "net_charge", "tpsa", "sa", "tox",
)


def cmd_props(config: RunConfig, args, out_dir: Path) -> int:
    import csv

    from .chemprops import content_properties, sa_score
    from .metrics import csv_cell
    from .smiles import SmilesError, read_smiles

    input_path = _require(args.input, "input SMILES file")
    parsed = []
    for line in _read_smiles_lines(input_path):
        try:
            parsed.append((line, read_smiles(line)))
        except SmilesError as exc:
            log.warning("skipping %r: %s", line, exc)
    table = _load_sa_table(config, fallback_graphs=[g for _, g in parsed])
    tox = _tox_scorer(config)

    out_path = out_dir / "props.csv"
    with open(out_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(PROPS_COLUMNS)
        for smiles, graph in parsed:
            vector = content_properties(graph)
            writer.writerow([
                csv_cell(value) for value in (
                    smiles, *vector.as_tuple(), sa_score(graph, table), tox(graph),
                )
            ])
    write_resolved_config(
        out_dir, "props", config, {str(input_path): content_hash(input_path)}
    )
    log.info("scored %d molecules -> %s", len(parsed), out_path)
    return EXIT_OK


def cmd_plot(config: RunConfig, args, out_dir: Path) -> int:
    import matplotlib

    matplotlib.use("Agg")
    import csv

    import matplotlib.pyplot as plt
    import numpy as np

    corpus, labeled_path = _corpus_pools(config)
    inputs = {str(labeled_path): content_hash(labeled_path)}

    # principal-component projection of the 8 content properties,
    # colored by the task's style score
    matrix = np.array([r.props.as_tuple() for r in corpus.records], dtype=float)
    centered = matrix - matrix.mean(axis=0)
    centered /= np.maximum(centered.std(axis=0), 1e-9)
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    projected = centered @ vt[:2].T
    style = np.array([
        r.tox if config.task == "toxicity" else r.sa for r in corpus.records
    ])
    fig, ax = plt.subplots(figsize=(7, 6))
    points = ax.scatter(
        projected[:, 0], projected[:, 1], c=style, s=8, cmap="viridis"
    )
    fig.colorbar(points, ax=ax, label=f"{config.task} score")
    ax.set_xlabel("PC 1")
    ax.set_ylabel("PC 2")
    ax.set_title("Content properties by style score")
    projection_path = out_dir / "projection.png"
    fig.savefig(projection_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    written = [projection_path]

    if args.report:
        report_path = _require(args.report, "evaluation report CSV")
        inputs[str(report_path)] = content_hash(report_path)
        with open(report_path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        series = {
            "improvement": [float(r["imp"]) for r in rows if r["imp"]],
            "pss": [float(r["pss"]) for r in rows if r["pss"]],
        }
        fig, axes = plt.subplots(1, len(series), figsize=(6 * len(series), 4))
        for ax, (name, values) in zip(np.atleast_1d(axes), series.items()):
            ax.hist(values, bins=30)
            ax.set_xlabel(name)
            ax.set_ylabel("count")
        fig.suptitle("Per-molecule transfer metrics")
        hist_path = out_dir / "metrics_hist.png"
        fig.savefig(hist_path, dpi=150, bbox_inches="tight")
        plt.close(fig)
        written.append(hist_path)

    write_resolved_config(out_dir, "plot", config, inputs)
    log.info("wrote %s", ", ".join(str(p) for p in written))
    return EXIT_OK


# ------------------------------------------------------------------ parser


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--config",
        default=os.environ.get(CONFIG_ENV_VAR),
        help=f"JSON run config (default: ${CONFIG_ENV_VAR})",
    )
    parser.add_argument("--task", help="style task: synthesizability (sa) or toxicity")
    parser.add_argument("--seed", type=int, help="global random seed")
    hints = {float: float, int: int}
    for section, cls in _SECTIONS.items():
        type_hints = typing.get_type_hints(cls)
        for f in dataclasses.fields(cls):
            flag = f"--{section}-{f.name.replace('_', '-')}"
            parser.add_argument(
                flag,
                dest=f"{section}.{f.name}",
                type=hints.get(type_hints[f.name], str),
                help=f"override config key {section}.{f.name}",
            )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="molshift",
        description=__doc__,
        epilog=EXIT_CODE_DOC,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    specs = [
        ("gen", cmd_gen, "generate the synthetic desk corpus"),
        ("ingest", cmd_ingest, "score and pool-label a raw SMILES corpus"),
        ("pretrain", cmd_pretrain, "pretrain the guided sequence model"),
        ("train", cmd_train, "adversarial transfer training on frozen latents"),
        ("transfer", cmd_transfer, "transfer molecules from a SMILES file"),
        ("eval", cmd_eval, "transfer a test set and write the metrics report"),
        ("props", cmd_props, "score SMILES lines into a property CSV"),
        ("plot", cmd_plot, "emit static figures from corpus and report files"),
    ]
    for name, handler, help_text in specs:
        p = sub.add_parser(
            name,
            help=help_text,
            epilog=EXIT_CODE_DOC,
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
        _add_config_flags(p)
        p.set_defaults(handler=handler)
    sub.choices["gen"].add_argument(
        "--size", type=int, default=10000, help="number of molecules to generate"
    )
    for name in ("transfer", "eval", "props"):
        sub.choices[name].add_argument(
            "--input", required=True, help="line-oriented SMILES file"
        )
    sub.choices["plot"].add_argument(
        "--report", help="evaluation report CSV for per-metric histograms"
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    from .data import AllInvalid, PoolTooSmall
    from .guidedvae import EmptyCorpus
    from .guidedvae import NonFiniteLoss as VaeNonFiniteLoss
    from .metrics import EmptyTestSet, NegativeFactor, ScoringFailure
    from .styleflow import TooFewInstances
    from .transfer import EmptyPool, InvalidInput
    from .transfer import NonFiniteLoss as TransferNonFiniteLoss

    try:
        config = apply_overrides(load_config(args.config), args)
        with own_directory(Path(config.paths.out_dir)) as out_dir:
            return args.handler(config, args, out_dir)
    except BadConfig as exc:
        log.error("bad config: %s", exc)
        return EXIT_BAD_CONFIG
    except (MissingCheckpoint, FileNotFoundError) as exc:
        log.error("missing artifact: %s", exc)
        return EXIT_MISSING_ARTIFACT
    except (
        VaeNonFiniteLoss, TransferNonFiniteLoss, EmptyCorpus, EmptyPool,
        PoolTooSmall, AllInvalid, TooFewInstances,
    ) as exc:
        log.error("training aborted: %s", exc)
        return EXIT_TRAINING_ABORTED
    except (ScoringFailure, NegativeFactor, EmptyTestSet, InvalidInput) as exc:
        log.error("scoring failure: %s", exc)
        return EXIT_SCORING_FAILURE


if __name__ == "__main__":
    sys.exit(main())
