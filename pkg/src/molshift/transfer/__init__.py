"""Latent-space adversarial attribute transfer: generator,
discriminator, training loop, and the k-candidate inference protocol."""

from .inference import (
    CandidateRecord,
    InvalidInput,
    TransferBundle,
    TransferResult,
    transfer_molecule,
)
from .losses import (
    AdversarialParts,
    adversarial_losses,
    cycle_loss,
    gradient_penalty,
    real_score,
    recon_loss,
    style_loss,
)
from .networks import FAKE_CLASS, N_STYLES, DimensionMismatch, Discriminator, Generator
from .train import (
    EmptyPool,
    NonFiniteLoss,
    TrainResult,
    TransferConfig,
    encode_pool,
    load_transfer_checkpoint,
    train,
    train_latent,
)

__all__ = [
    "AdversarialParts",
    "CandidateRecord",
    "DimensionMismatch",
    "Discriminator",
    "EmptyPool",
    "FAKE_CLASS",
    "Generator",
    "InvalidInput",
    "N_STYLES",
    "NonFiniteLoss",
    "TrainResult",
    "TransferBundle",
    "TransferConfig",
    "TransferResult",
    "adversarial_losses",
    "cycle_loss",
    "encode_pool",
    "gradient_penalty",
    "load_transfer_checkpoint",
    "real_score",
    "recon_loss",
    "style_loss",
    "train",
    "train_latent",
    "transfer_molecule",
]
