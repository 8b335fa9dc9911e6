"""Trainable toxicity surrogate: logistic regression over circular
fingerprints, fit by full-batch gradient descent. Small, deterministic,
and good enough to reproduce alert-style labels almost perfectly."""

import json
from dataclasses import dataclass

import numpy as np

from ..smiles.graph import MolGraph
from .fingerprint import DEFAULT_RADIUS, DEFAULT_WIDTH, circular_fingerprint


class DegenerateLabels(ValueError):
    def __init__(self):
        super().__init__("training labels contain a single class")


@dataclass(frozen=True)
class ToxTrainConfig:
    width: int = DEFAULT_WIDTH
    radius: int = DEFAULT_RADIUS
    epochs: int = 200
    lr: float = 0.5
    l2: float = 1e-4
    holdout_fraction: float = 0.2
    seed: int = 0


@dataclass(frozen=True)
class ToxModel:
    weights: np.ndarray
    bias: float
    width: int
    radius: int
    corpus_hash: str = ""
    auroc: float = float("nan")

    def to_json(self) -> str:
        return json.dumps(
            {
                "weights": self.weights.tolist(),
                "bias": self.bias,
                "width": self.width,
                "radius": self.radius,
                "corpus_hash": self.corpus_hash,
                "auroc": self.auroc,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "ToxModel":
        data = json.loads(text)
        return cls(
            weights=np.asarray(data["weights"], dtype=np.float64),
            bias=data["bias"],
            width=data["width"],
            radius=data["radius"],
            corpus_hash=data["corpus_hash"],
            auroc=data["auroc"],
        )


def _features(graphs: list[MolGraph], width: int, radius: int) -> np.ndarray:
    x = np.zeros((len(graphs), width), dtype=np.float64)
    for row, graph in enumerate(graphs):
        for bit in circular_fingerprint(graph, radius=radius, width=width).bits:
            x[row, bit] = 1.0
    return x


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def auroc(labels: np.ndarray, scores: np.ndarray) -> float:
    """Area under the ROC curve by the rank statistic, ties averaged."""
    labels = np.asarray(labels, dtype=np.float64)
    scores = np.asarray(scores, dtype=np.float64)
    n_pos = int(labels.sum())
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DegenerateLabels()
    order = np.argsort(scores, kind="stable")
    ranks = np.empty(len(scores), dtype=np.float64)
    sorted_scores = scores[order]
    i = 0
    while i < len(scores):
        j = i
        while j + 1 < len(scores) and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    rank_sum = ranks[labels == 1].sum()
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def train_tox_predictor(
    graphs: list[MolGraph],
    labels: list[int],
    config: ToxTrainConfig = ToxTrainConfig(),
    corpus_hash: str = "",
) -> ToxModel:
    y = np.asarray(labels, dtype=np.float64)
    if len(set(labels)) < 2:
        raise DegenerateLabels()
    rng = np.random.default_rng(config.seed)
    perm = rng.permutation(len(graphs))
    n_hold = max(1, int(len(graphs) * config.holdout_fraction))
    hold_idx, train_idx = perm[:n_hold], perm[n_hold:]
    if len(set(y[train_idx])) < 2 or len(set(y[hold_idx])) < 2:
        raise DegenerateLabels()

    x = _features(graphs, config.width, config.radius)
    x_train, y_train = x[train_idx], y[train_idx]
    w = np.zeros(config.width, dtype=np.float64)
    b = 0.0
    n = len(train_idx)
    for _ in range(config.epochs):
        p = _sigmoid(x_train @ w + b)
        grad_w = x_train.T @ (p - y_train) / n + config.l2 * w
        grad_b = float(np.mean(p - y_train))
        w -= config.lr * grad_w
        b -= config.lr * grad_b

    held_scores = _sigmoid(x[hold_idx] @ w + b)
    return ToxModel(
        weights=w,
        bias=b,
        width=config.width,
        radius=config.radius,
        corpus_hash=corpus_hash,
        auroc=auroc(y[hold_idx], held_scores),
    )


def predict_tox(model: ToxModel, graph: MolGraph) -> float:
    fp = circular_fingerprint(graph, radius=model.radius, width=model.width)
    z = model.bias + sum(model.weights[bit] for bit in fp.bits)
    return float(_sigmoid(np.asarray([z]))[0])
