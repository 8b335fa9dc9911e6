"""Normalizing flow that models a style distribution from a handful of
exemplar latents."""

from .flow import (
    VARIANCE_FLOOR,
    FlowChain,
    FlowResult,
    FlowStep,
    MaskedLinear,
    StyleCode,
    StylePrior,
    TooFewInstances,
    batch_prior,
    gaussian_log_density,
    iaf_step,
    sample_style,
)

__all__ = [
    "VARIANCE_FLOOR",
    "FlowChain",
    "FlowResult",
    "FlowStep",
    "MaskedLinear",
    "StyleCode",
    "StylePrior",
    "TooFewInstances",
    "batch_prior",
    "gaussian_log_density",
    "iaf_step",
    "sample_style",
]
