"""Latent-space generator and (styles + fake)-class discriminator."""

import torch
from torch import nn

N_STYLES = 2
FAKE_CLASS = N_STYLES  # logit index for "generated"


class DimensionMismatch(ValueError):
    pass


class Generator(nn.Module):
    """Three feed-forward layers mapping concat(z_c, h_s) -> z_g."""

    def __init__(self, latent_dim: int, hidden: int = 256):
        super().__init__()
        self.latent_dim = latent_dim
        self.net = nn.Sequential(
            nn.Linear(2 * latent_dim, hidden),
            nn.Tanh(),
            nn.Linear(hidden, hidden),
            nn.Tanh(),
            nn.Linear(hidden, latent_dim),
        )

    def forward(self, z_c: torch.Tensor, h_s: torch.Tensor) -> torch.Tensor:
        if z_c.shape[-1] != self.latent_dim or h_s.shape[-1] != self.latent_dim:
            raise DimensionMismatch(
                f"expected latent width {self.latent_dim}, got "
                f"{z_c.shape[-1]} and {h_s.shape[-1]}"
            )
        if z_c.shape[:-1] != h_s.shape[:-1]:
            raise DimensionMismatch(
                f"batch shapes differ: {tuple(z_c.shape)} vs {tuple(h_s.shape)}"
            )
        return self.net(torch.cat([z_c, h_s], dim=-1))


class Discriminator(nn.Module):
    """Three feed-forward layers mapping z -> (style_0, style_1, fake)."""

    def __init__(self, latent_dim: int, hidden: int = 256):
        super().__init__()
        self.latent_dim = latent_dim
        self.net = nn.Sequential(
            nn.Linear(latent_dim, hidden),
            nn.LeakyReLU(0.2),
            nn.Linear(hidden, hidden),
            nn.LeakyReLU(0.2),
            nn.Linear(hidden, N_STYLES + 1),
        )

    def forward(self, z: torch.Tensor) -> torch.Tensor:
        if z.shape[-1] != self.latent_dim:
            raise DimensionMismatch(
                f"expected latent width {self.latent_dim}, got {z.shape[-1]}"
            )
        return self.net(z)
