"""Adversarial, style, reconstruction, and cycle objectives over latents."""

from dataclasses import dataclass

import torch
from torch import nn

from .networks import FAKE_CLASS


def _class_nll(logits: torch.Tensor, cls: int) -> torch.Tensor:
    """Mean negative log softmax-probability of one class."""
    target = torch.full(logits.shape[:-1], cls, dtype=torch.long)
    return nn.functional.cross_entropy(logits, target)


def style_loss(disc, z_g: torch.Tensor, target_style: int) -> torch.Tensor:
    """Generator objective: make z_g classify as the target style."""
    return _class_nll(disc(z_g), target_style)


@dataclass(frozen=True)
class AdversarialParts:
    style_0: torch.Tensor  # -[log p(0|z_c^0) + log p(0|z_hat^0)]
    style_1: torch.Tensor
    fake: torch.Tensor  # -log p(fake|z_g)

    @property
    def total(self) -> torch.Tensor:
        return self.style_0 + self.style_1 + self.fake


def adversarial_losses(
    disc,
    z_c_0: torch.Tensor,
    z_hat_0: torch.Tensor,
    z_c_1: torch.Tensor,
    z_hat_1: torch.Tensor,
    z_g: torch.Tensor,
) -> AdversarialParts:
    """Discriminator objective: real latents (encoded and same-style
    regenerated) classify as their style, generated latents as fake."""
    return AdversarialParts(
        style_0=_class_nll(disc(z_c_0), 0) + _class_nll(disc(z_hat_0), 0),
        style_1=_class_nll(disc(z_c_1), 1) + _class_nll(disc(z_hat_1), 1),
        fake=_class_nll(disc(z_g), FAKE_CLASS),
    )


def real_score(disc, z: torch.Tensor) -> torch.Tensor:
    """Scalar 'looks real' score: logsumexp over the style logits."""
    return torch.logsumexp(disc(z)[..., :FAKE_CLASS], dim=-1)


def gradient_penalty(
    disc,
    real: torch.Tensor,
    fake: torch.Tensor,
    generator: torch.Generator | None = None,
) -> torch.Tensor:
    """Mean squared deviation of the real-score input-gradient norm from
    1, measured at uniform real/fake interpolates."""
    assert real.shape == fake.shape
    u = torch.rand((real.shape[0], 1), generator=generator, dtype=real.dtype)
    # the penalty's value contains a derivative, so grad mode must be on
    # even when the caller evaluates under no_grad
    with torch.enable_grad():
        mixed = (u * real + (1.0 - u) * fake).detach().requires_grad_(True)
        score = real_score(disc, mixed)
        if score.grad_fn is None:  # score ignores its input entirely
            grads = torch.zeros_like(mixed)
        else:
            (grads,) = torch.autograd.grad(
                score.sum(), mixed, create_graph=True, retain_graph=True,
                allow_unused=True,
            )
            if grads is None:
                grads = torch.zeros_like(mixed)
    norms = grads.norm(2, dim=-1)
    return ((norms - 1.0) ** 2).mean()


def recon_loss(gen, z_c: torch.Tensor, h_s: torch.Tensor) -> torch.Tensor:
    """Unit-variance Gaussian NLL (up to constants): half squared error
    between the same-style regeneration and the original latent."""
    out = gen(z_c, h_s)
    return 0.5 * ((out - z_c) ** 2).sum(dim=-1).mean()


def cycle_loss(
    gen, z_g: torch.Tensor, z_c: torch.Tensor, h_s: torch.Tensor
) -> torch.Tensor:
    """Mapping the transferred latent back with the source style must
    recover the original latent."""
    out = gen(z_g, h_s)
    return 0.5 * ((out - z_c) ** 2).sum(dim=-1).mean()
