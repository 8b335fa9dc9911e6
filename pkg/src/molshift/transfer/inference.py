"""Transfer a single molecule: k style draws, k decodes, best pick."""

from dataclasses import dataclass

import torch

from ..chemprops import content_properties
from ..data import sample_style_instances
from ..guidedvae import VAEModel, pad_batch
from ..metrics import TaskSpec, pss
from ..smiles import SmilesError, read_smiles
from ..smiles.valence import validate
from ..styleflow import FlowChain, sample_style
from .networks import Generator
from .train import TransferConfig, encode_pool


class InvalidInput(ValueError):
    pass


@dataclass(frozen=True)
class TransferBundle:
    model: VAEModel  # frozen sequence model
    generator: Generator
    flow: FlowChain
    config: TransferConfig


@dataclass(frozen=True)
class CandidateRecord:
    smiles: str
    valid: bool
    pss: float | None
    improvement: float | None

    @property
    def qualifies(self) -> bool:
        return self.valid and self.pss is not None


@dataclass(frozen=True)
class TransferResult:
    input_smiles: str
    best_smiles: str | None
    best_improvement: float | None
    best_pss: float | None
    success: bool  # a valid candidate cleared the PSS floor
    candidates: tuple[CandidateRecord, ...]


def transfer_molecule(
    smiles: str,
    target_pool: list[str],
    bundle: TransferBundle,
    task: TaskSpec,
    scales: dict[str, float],
    seed: int = 0,
    k: int | None = None,
    pss_floor: float | None = None,
    pool_latents: torch.Tensor | None = None,
) -> TransferResult:
    """Draw k target-style codes, generate and decode k candidates, and
    return the highest-improvement valid candidate above the PSS floor
    (best-effort candidate flagged unsuccessful when none qualifies)."""
    if not target_pool:
        raise InvalidInput("target pool is empty")
    try:
        graph = read_smiles(smiles)
    except SmilesError as exc:
        raise InvalidInput(f"input does not parse: {exc}") from exc
    if not validate(graph).valid:
        raise InvalidInput("input fails valence validation")

    k = bundle.config.decode_count if k is None else k
    floor = bundle.config.pss_floor if pss_floor is None else pss_floor
    big_k = min(bundle.config.style_instances, len(target_pool))
    if pool_latents is None:
        pool_latents = encode_pool(bundle.model, target_pool)

    vocab = bundle.model.config.vocab
    d = bundle.model.config.latent_dim
    with torch.no_grad():
        ids = pad_batch([vocab.encode(smiles)])
        z_c, _, _ = bundle.model.encode(ids, noise=torch.zeros(1, d))
        codes = []
        for t in range(k):
            phi_idx = sample_style_instances(
                list(range(len(target_pool))), big_k, seed=seed * 7919 + t
            )
            rng = torch.Generator().manual_seed(seed * 7907 + t)
            code = sample_style(pool_latents[phi_idx], bundle.flow, generator=rng)
            codes.append(code.h_s)
        h_s = torch.cat(codes, dim=0)  # (k, d)
        z_g = bundle.generator(z_c.expand(k, -1), h_s)
        decoded = bundle.model.decode_smiles(z_g)

    x_props = content_properties(graph)
    x_score = task.score(graph)
    candidates = []
    for text in decoded:
        y_graph = None
        try:
            parsed = read_smiles(text)
            if validate(parsed).valid:
                y_graph = parsed
        except SmilesError:
            pass
        if y_graph is None:
            candidates.append(CandidateRecord(text, False, None, None))
            continue
        candidate_pss = pss(x_props, content_properties(y_graph), scales)
        candidates.append(CandidateRecord(
            text, True, candidate_pss, x_score - task.score(y_graph)
        ))

    qualifying = [c for c in candidates if c.valid and c.pss > floor]
    pool = qualifying or [c for c in candidates if c.valid]
    if not pool:
        return TransferResult(smiles, None, None, None, False, tuple(candidates))
    best = max(pool, key=lambda c: c.improvement)  # max keeps first tie
    return TransferResult(
        input_smiles=smiles,
        best_smiles=best.smiles,
        best_improvement=best.improvement,
        best_pss=best.pss,
        success=bool(qualifying),
        candidates=tuple(candidates),
    )
