"""Latent posteriors, Woodbury factors and state likelihoods."""

from .cache import ScoringCache, prepare_scoring
from .likelihood import (
    FrameScore,
    LikelihoodMode,
    classify_frame,
    classify_frames,
    loglik_point,
    loglik_uncertainty,
    map_blocks,
    selection_mask,
    state_frame_terms,
    state_logliks,
)
from .posterior import GaussianPosterior, posterior_x, posterior_z, posterior_z_from_stats
from .woodbury import WoodburyFactor, woodbury, woodbury_factor

__all__ = [
    "FrameScore",
    "GaussianPosterior",
    "LikelihoodMode",
    "ScoringCache",
    "WoodburyFactor",
    "classify_frame",
    "classify_frames",
    "loglik_point",
    "loglik_uncertainty",
    "map_blocks",
    "posterior_x",
    "posterior_z",
    "posterior_z_from_stats",
    "prepare_scoring",
    "selection_mask",
    "state_frame_terms",
    "state_logliks",
    "woodbury",
    "woodbury_factor",
]
