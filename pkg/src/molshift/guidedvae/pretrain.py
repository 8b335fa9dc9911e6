"""Pretraining loop for the guided VAE.

Adam over the joint objective, KL weight linearly warmed up over the
first tenth of the steps, one checkpoint per epoch, per-step CSV log.
The returned model is frozen; downstream stages never update it.
"""

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import torch

from ..chemprops import content_properties
from ..smiles import read_smiles
from .losses import pretrain_loss
from .model import (
    ATTRIBUTE_NAMES,
    BINARY_ATTRIBUTES,
    AttributeSpec,
    VAEConfig,
    VAEModel,
)
from .vocab import Vocabulary

WARMUP_FRACTION = 0.1


class EmptyCorpus(ValueError):
    def __init__(self):
        super().__init__("training corpus contains no molecules")


class NonFiniteLoss(RuntimeError):
    def __init__(self, step: int, checkpoint: str | None):
        super().__init__(
            f"loss became non-finite at step {step}; "
            f"last good checkpoint: {checkpoint or 'none'}"
        )
        self.step = step
        self.checkpoint = checkpoint


class VocabularyMismatch(ValueError):
    pass


@dataclass(frozen=True)
class PretrainConfig:
    epochs: int = 10
    batch_size: int = 64
    lr: float = 1e-3
    seed: int = 0
    checkpoint_dir: str | None = None
    log_path: str | None = None


@dataclass
class PretrainResult:
    model: VAEModel
    specs: tuple[AttributeSpec, ...]
    parameter_hash: str
    checkpoint_path: str | None
    log_rows: list[dict]


def raw_attributes(graph) -> list[float]:
    """The 8 guided attribute values of a molecule, unnormalized."""
    p = content_properties(graph)
    aromatic = 1.0 if any(a.aromatic for a in graph.atoms) else 0.0
    return [
        p.mw, p.logp, float(p.hba), float(p.hbd), float(p.rot_bonds),
        float(p.net_charge), p.tpsa, aromatic,
    ]


def build_attribute_specs(raw: torch.Tensor) -> tuple[AttributeSpec, ...]:
    """Standardization stats per attribute over the training corpus."""
    specs = []
    for t, name in enumerate(ATTRIBUTE_NAMES):
        if name in BINARY_ATTRIBUTES:
            specs.append(AttributeSpec(name=name, kind="binary"))
        else:
            column = raw[:, t]
            std = float(column.std(unbiased=False))
            specs.append(
                AttributeSpec(
                    name=name,
                    kind="continuous",
                    mean=float(column.mean()),
                    std=max(std, 1e-6),
                )
            )
    return tuple(specs)


def normalize_attributes(
    raw: torch.Tensor, specs: tuple[AttributeSpec, ...]
) -> torch.Tensor:
    out = raw.clone()
    for t, spec in enumerate(specs):
        if spec.kind == "continuous":
            out[:, t] = (out[:, t] - spec.mean) / spec.std
    return out


def pad_batch(sequences: list[list[int]], pad_id: int = 0) -> torch.Tensor:
    width = max(len(s) for s in sequences)
    out = torch.full((len(sequences), width), pad_id, dtype=torch.long)
    for i, seq in enumerate(sequences):
        out[i, : len(seq)] = torch.tensor(seq, dtype=torch.long)
    return out


def save_checkpoint(
    path: str | Path,
    model: VAEModel,
    specs: tuple[AttributeSpec, ...],
    metadata: dict | None = None,
) -> None:
    config = model.config
    torch.save(
        {
            "format_version": 1,
            "vocab_tokens": list(config.vocab.tokens),
            "config": {
                "token_embed_dim": config.token_embed_dim,
                "hidden_dim": config.hidden_dim,
                "rnn_layers": config.rnn_layers,
                "latent_dim": config.latent_dim,
                "kl_weight": config.kl_weight,
                "n_attributes": config.n_attributes,
                "head_hidden": config.head_hidden,
                "max_len": config.max_len,
            },
            "specs": [
                {"name": s.name, "kind": s.kind, "mean": s.mean, "std": s.std}
                for s in specs
            ],
            "state_dict": model.state_dict(),
            "metadata": metadata or {},
        },
        str(path),
    )


def load_checkpoint(
    path: str | Path, expect_vocab: Vocabulary | None = None, frozen: bool = True
) -> tuple[VAEModel, tuple[AttributeSpec, ...], dict]:
    payload = torch.load(str(path), weights_only=False)
    vocab = Vocabulary(tokens=tuple(payload["vocab_tokens"]))
    if expect_vocab is not None and vocab.tokens != expect_vocab.tokens:
        raise VocabularyMismatch(
            "checkpoint vocabulary does not match the requested vocabulary"
        )
    config = VAEConfig(vocab=vocab, **payload["config"])
    model = VAEModel(config)
    model.load_state_dict(payload["state_dict"])
    specs = tuple(AttributeSpec(**entry) for entry in payload["specs"])
    if frozen:
        model.freeze()
    model.eval()
    return model, specs, payload["metadata"]


def pretrain(
    corpus: list[str],
    config: VAEConfig,
    train: PretrainConfig = PretrainConfig(),
) -> PretrainResult:
    if not corpus:
        raise EmptyCorpus()
    torch.manual_seed(train.seed)
    generator = torch.Generator().manual_seed(train.seed)

    graphs = [read_smiles(s) for s in corpus]
    raw = torch.tensor([raw_attributes(g) for g in graphs], dtype=torch.float32)
    specs = build_attribute_specs(raw)
    labels = normalize_attributes(raw, specs)
    kinds = [s.kind for s in specs]
    sequences = [config.vocab.encode(s) for s in corpus]

    model = VAEModel(config)
    model.train()
    optimizer = torch.optim.Adam(model.training_parameters(), lr=train.lr)

    n = len(corpus)
    batches_per_epoch = math.ceil(n / train.batch_size)
    total_steps = max(1, train.epochs * batches_per_epoch)
    warmup_steps = max(1, int(WARMUP_FRACTION * total_steps))

    checkpoint_dir = Path(train.checkpoint_dir) if train.checkpoint_dir else None
    if checkpoint_dir:
        checkpoint_dir.mkdir(parents=True, exist_ok=True)
    last_checkpoint: str | None = None

    log_rows: list[dict] = []
    step = 0
    for epoch in range(train.epochs):
        order = torch.randperm(n, generator=generator).tolist()
        for start in range(0, n, train.batch_size):
            batch_idx = order[start : start + train.batch_size]
            token_ids = pad_batch([sequences[i] for i in batch_idx])
            batch_labels = labels[batch_idx]
            ramp = min(1.0, (step + 1) / warmup_steps)
            parts = pretrain_loss(
                model,
                token_ids,
                batch_labels,
                kinds,
                kl_weight=config.kl_weight * ramp,
                generator=generator,
            )
            if not torch.isfinite(parts.total):
                raise NonFiniteLoss(step, last_checkpoint)
            optimizer.zero_grad()
            parts.total.backward()
            optimizer.step()
            log_rows.append(
                {
                    "step": step,
                    "epoch": epoch,
                    "elbo": parts.elbo.total.item(),
                    "reconstruction": parts.elbo.reconstruction.item(),
                    "kl": parts.elbo.kl.item(),
                    "excitation": parts.excitation.item(),
                    "inhibition": parts.inhibition.item(),
                    "total": parts.total.item(),
                }
            )
            step += 1
        if checkpoint_dir:
            path = checkpoint_dir / f"pretrain_epoch{epoch:03d}.pt"
            save_checkpoint(
                path, model, specs, metadata={"epoch": epoch, "step": step}
            )
            last_checkpoint = str(path)

    if train.log_path:
        with open(train.log_path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(log_rows[0].keys()))
            writer.writeheader()
            writer.writerows(log_rows)

    parameter_hash = model.freeze()
    model.eval()
    if checkpoint_dir:
        final = checkpoint_dir / "pretrain_final.pt"
        save_checkpoint(
            final,
            model,
            specs,
            metadata={"parameter_hash": parameter_hash, "steps": step},
        )
        last_checkpoint = str(final)
    return PretrainResult(
        model=model,
        specs=specs,
        parameter_hash=parameter_hash,
        checkpoint_path=last_checkpoint,
        log_rows=log_rows,
    )
