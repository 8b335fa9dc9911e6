"""Guided sequence VAE over SMILES tokens, frozen after pretraining."""

from .losses import (
    ElboParts,
    LossParts,
    elbo_loss,
    excitation_loss,
    inhibition_loss,
    kl_divergence,
    pretrain_loss,
    reconstruction_nll,
)
from .model import (
    ATTRIBUTE_NAMES,
    BINARY_ATTRIBUTES,
    N_ATTRIBUTES,
    AttributeSpec,
    FrozenModel,
    VAEConfig,
    VAEModel,
    reverse_gradient,
)
from .pretrain import (
    EmptyCorpus,
    NonFiniteLoss,
    PretrainConfig,
    PretrainResult,
    VocabularyMismatch,
    build_attribute_specs,
    load_checkpoint,
    normalize_attributes,
    pad_batch,
    pretrain,
    raw_attributes,
    save_checkpoint,
)
from .vocab import BOS, EOS, PAD, OutOfVocabularyToken, Vocabulary

__all__ = [
    "ATTRIBUTE_NAMES",
    "BINARY_ATTRIBUTES",
    "BOS",
    "EOS",
    "ElboParts",
    "EmptyCorpus",
    "FrozenModel",
    "LossParts",
    "N_ATTRIBUTES",
    "NonFiniteLoss",
    "OutOfVocabularyToken",
    "PAD",
    "PretrainConfig",
    "PretrainResult",
    "AttributeSpec",
    "VAEConfig",
    "VAEModel",
    "VocabularyMismatch",
    "Vocabulary",
    "build_attribute_specs",
    "elbo_loss",
    "excitation_loss",
    "inhibition_loss",
    "kl_divergence",
    "load_checkpoint",
    "normalize_attributes",
    "pad_batch",
    "pretrain",
    "pretrain_loss",
    "raw_attributes",
    "reconstruction_nll",
    "reverse_gradient",
    "save_checkpoint",
]
