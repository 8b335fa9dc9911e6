"""Inverse autoregressive flow over style latents.

Each step reads the previous latent through a strictly autoregressive
masked network (output dimension i sees only input dimensions < i, plus
an unmasked conditioning vector) and gates the update:

    z_t = sigma_t * z_{t-1} + (1 - sigma_t) * eps_t,  sigma_t = sigmoid(phi_t)

so the Jacobian is lower-triangular with diagonal sigma_t and the log
determinant is just sum(log sigma_t).
"""

import math
from dataclasses import dataclass

import torch
from torch import nn

VARIANCE_FLOOR = 1e-4


class TooFewInstances(ValueError):
    def __init__(self, k: int):
        super().__init__(f"style prior needs at least 2 instances, got {k}")


@dataclass(frozen=True)
class StylePrior:
    mu0: torch.Tensor  # (d,)
    var0: torch.Tensor  # (d,), elementwise sigma_0^2
    k: int


@dataclass(frozen=True)
class StyleCode:
    h_s: torch.Tensor
    log_density: torch.Tensor


@dataclass(frozen=True)
class FlowResult:
    z: torch.Tensor  # (B, d) transformed latents
    logdet: torch.Tensor  # (B,) accumulated sum of log sigma over steps
    sigmas: tuple[torch.Tensor, ...]  # per-step gates, each (B, d)


def batch_prior(latents: torch.Tensor) -> StylePrior:
    """Gaussian prior from K style-instance latents: sample mean and
    unbiased (K-1) variance, floored elementwise."""
    if latents.ndim != 2 or len(latents) < 2:
        raise TooFewInstances(len(latents) if latents.ndim == 2 else 0)
    mu0 = latents.mean(dim=0)
    var0 = latents.var(dim=0, unbiased=True).clamp_min(VARIANCE_FLOOR)
    return StylePrior(mu0=mu0, var0=var0, k=len(latents))


def gaussian_log_density(z: torch.Tensor, prior: StylePrior) -> torch.Tensor:
    """Diagonal-Gaussian log density, per batch row."""
    var = prior.var0
    return -0.5 * (
        ((z - prior.mu0) ** 2 / var) + torch.log(2 * math.pi * var)
    ).sum(dim=-1)


class MaskedLinear(nn.Linear):
    def __init__(self, in_features: int, out_features: int, mask: torch.Tensor):
        super().__init__(in_features, out_features)
        assert mask.shape == (out_features, in_features)
        self.register_buffer("mask", mask)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return nn.functional.linear(x, self.weight * self.mask, self.bias)


def _build_masks(
    d: int, hidden: int, context_dim: int
) -> tuple[torch.Tensor, torch.Tensor]:
    """Masks for a two-layer strictly autoregressive net.

    Input labels: z dim j gets j; context gets -1 (feeds everything).
    Hidden labels cycle over {-1, 0, .., d-2}; a hidden unit labeled m
    sees inputs labeled <= m. Output for dim i sees hidden labeled < i,
    so no output depends on its own or later input dimensions.
    """
    in_labels = torch.cat([torch.arange(d), torch.full((context_dim,), -1)])
    hidden_labels = torch.arange(hidden) % d - 1  # -1 .. d-2
    m1 = (hidden_labels[:, None] >= in_labels[None, :]).float()
    out_labels = torch.arange(d)
    m2_half = (out_labels[:, None] > hidden_labels[None, :]).float()
    m2 = torch.cat([m2_half, m2_half], dim=0)  # eps rows then phi rows
    return m1, m2


class FlowStep(nn.Module):
    """g_t: (z_prev, c) -> (eps_t, phi_t), strictly autoregressive in z."""

    def __init__(self, d: int, hidden: int, context_dim: int):
        super().__init__()
        m1, m2 = _build_masks(d, hidden, context_dim)
        self.lin1 = MaskedLinear(d + context_dim, hidden, m1)
        self.lin2 = MaskedLinear(hidden, 2 * d, m2)
        self.d = d

    def forward(
        self, z: torch.Tensor, c: torch.Tensor
    ) -> tuple[torch.Tensor, torch.Tensor]:
        h = torch.tanh(self.lin1(torch.cat([z, c], dim=-1)))
        out = self.lin2(h)
        return out[..., : self.d], out[..., self.d :]


def iaf_step(
    z_prev: torch.Tensor, c: torch.Tensor, step: nn.Module
) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
    """One gated autoregressive update; returns (z_next, logdet, sigma)."""
    eps, phi = step(z_prev, c)
    sigma = torch.sigmoid(phi)
    z_next = sigma * z_prev + (1.0 - sigma) * eps
    logdet = torch.log(sigma).sum(dim=-1)
    return z_next, logdet, sigma


class FlowChain(nn.Module):
    def __init__(
        self,
        d: int,
        n_steps: int = 6,
        hidden: int = 64,
        context_dim: int | None = None,
        conditioner_hidden: int = 64,
    ):
        super().__init__()
        self.d = d
        self.n_steps = n_steps
        self.context_dim = context_dim if context_dim is not None else d
        self.steps = nn.ModuleList(
            FlowStep(d, hidden, self.context_dim) for _ in range(n_steps)
        )
        self.conditioner = nn.Sequential(
            nn.Linear(d, conditioner_hidden),
            nn.Tanh(),
            nn.Linear(conditioner_hidden, self.context_dim),
        )

    def condition(self, mu0: torch.Tensor) -> torch.Tensor:
        """Conditioning vector from the prior mean."""
        return self.conditioner(mu0)

    def forward(self, z0: torch.Tensor, c: torch.Tensor) -> FlowResult:
        z = z0
        logdet = torch.zeros(z0.shape[:-1], dtype=z0.dtype, device=z0.device)
        sigmas = []
        for step in self.steps:
            z, inc, sigma = iaf_step(z, c, step)
            logdet = logdet + inc
            sigmas.append(sigma)
        return FlowResult(z=z, logdet=logdet, sigmas=tuple(sigmas))

    @torch.no_grad()
    def invert(self, z_final: torch.Tensor, c: torch.Tensor) -> torch.Tensor:
        """Recover z0 by inverting each step, dimension by dimension.

        Inverting one step: eps_i and phi_i depend only on z_prev_{<i},
        so solving in index order keeps everything already known.
        """
        z = z_final
        for step in reversed(list(self.steps)):
            z_prev = torch.zeros_like(z)
            for i in range(self.d):
                eps, phi = step(z_prev, c)
                sigma = torch.sigmoid(phi)
                z_prev = z_prev.clone()
                z_prev[..., i] = (
                    z[..., i] - (1.0 - sigma[..., i]) * eps[..., i]
                ) / sigma[..., i]
            z = z_prev
        return z


def sample_style(
    instance_latents: torch.Tensor,
    chain: FlowChain,
    generator: torch.Generator | None = None,
    n_samples: int = 1,
) -> StyleCode:
    """Draw z0 from the batch prior of the style instances and push it
    through the chain; the density follows the change of variables."""
    prior = batch_prior(instance_latents)
    c = chain.condition(prior.mu0)
    noise = torch.randn(
        (n_samples, chain.d), generator=generator, dtype=prior.mu0.dtype
    )
    z0 = prior.mu0 + noise * torch.sqrt(prior.var0)
    result = chain.forward(z0, c.expand(n_samples, -1))
    log_density = gaussian_log_density(z0, prior) - result.logdet
    return StyleCode(h_s=result.z, log_density=log_density)
