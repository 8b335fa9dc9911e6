"""Loss terms for guided-VAE pretraining.

The total objective = reconstruction NLL + λ_kl · KL + excitation +
inhibition, where the inhibition term reaches the encoder through a
gradient-reversal connection (heads minimize it, encoder maximizes).
"""

from dataclasses import dataclass

import torch
from torch import nn
from torch.nn import functional as F

from .model import VAEModel, reverse_gradient


def kl_divergence(mean: torch.Tensor, logvar: torch.Tensor) -> torch.Tensor:
    """Closed-form KL(N(mean, diag exp(logvar)) || N(0, I)), summed over
    coordinates, averaged over the batch."""
    per_dim = 0.5 * (torch.exp(logvar) + mean**2 - 1.0 - logvar)
    return per_dim.sum(dim=-1).mean()


def reconstruction_nll(logits: torch.Tensor, targets: torch.Tensor) -> torch.Tensor:
    """Token-level negative log-likelihood, summed over the sequence,
    averaged over the batch; pad positions are ignored."""
    flat = F.cross_entropy(
        logits.reshape(-1, logits.shape[-1]),
        targets.reshape(-1),
        ignore_index=0,
        reduction="sum",
    )
    return flat / len(targets)


@dataclass(frozen=True)
class ElboParts:
    total: torch.Tensor
    reconstruction: torch.Tensor
    kl: torch.Tensor


def elbo_loss(
    model: VAEModel,
    token_ids: torch.Tensor,
    kl_weight: float,
    generator: torch.Generator | None = None,
    noise: torch.Tensor | None = None,
) -> tuple[ElboParts, torch.Tensor]:
    """Negative ELBO for a padded batch; also returns the sampled z so
    the attribute terms can reuse the same draw."""
    mean, logvar, z = model.encode(token_ids, generator=generator, noise=noise)
    logits = model.decoder_logits(token_ids[:, :-1], z)
    recon = reconstruction_nll(logits, token_ids[:, 1:])
    kl = kl_divergence(mean, logvar)
    return ElboParts(total=recon + kl_weight * kl, reconstruction=recon, kl=kl), z


def _attribute_nll(
    preds: torch.Tensor, labels: torch.Tensor, kinds: list[str]
) -> torch.Tensor:
    terms = []
    for t, kind in enumerate(kinds):
        if kind == "binary":
            terms.append(
                F.binary_cross_entropy_with_logits(preds[:, t], labels[:, t])
            )
        else:
            terms.append(torch.mean((preds[:, t] - labels[:, t]) ** 2))
    return torch.stack(terms).sum()


def excitation_loss(
    model: VAEModel, z: torch.Tensor, labels: torch.Tensor, kinds: list[str]
) -> torch.Tensor:
    """Each attribute must be predictable from its own guided scalar."""
    guided = model.guided_slots(z)
    preds = torch.cat(
        [
            head(guided[:, t : t + 1])
            for t, head in enumerate(model.excitation_heads)
        ],
        dim=1,
    )
    return _attribute_nll(preds, labels, kinds)


def inhibition_loss(
    model: VAEModel,
    z: torch.Tensor,
    labels: torch.Tensor,
    kinds: list[str],
    adversarial: bool = True,
) -> torch.Tensor:
    """Each attribute must NOT be predictable from the non-guided
    coordinates: heads minimize the NLL, the encoder sees the reversed
    gradient and maximizes it. Set adversarial=False for pure probing."""
    rest = model.rest_slots(z)
    if adversarial:
        rest = reverse_gradient(rest)
    preds = torch.cat(
        [head(rest) for head in model.inhibition_heads],
        dim=1,
    )
    return _attribute_nll(preds, labels, kinds)


@dataclass(frozen=True)
class LossParts:
    total: torch.Tensor
    elbo: ElboParts
    excitation: torch.Tensor
    inhibition: torch.Tensor


def pretrain_loss(
    model: VAEModel,
    token_ids: torch.Tensor,
    labels: torch.Tensor,
    kinds: list[str],
    kl_weight: float,
    generator: torch.Generator | None = None,
    noise: torch.Tensor | None = None,
) -> LossParts:
    elbo, z = elbo_loss(
        model, token_ids, kl_weight, generator=generator, noise=noise
    )
    excitation = excitation_loss(model, z, labels, kinds)
    inhibition = inhibition_loss(model, z, labels, kinds)
    return LossParts(
        total=elbo.total + excitation + inhibition,
        elbo=elbo,
        excitation=excitation,
        inhibition=inhibition,
    )
