"""Variational EM training of tied PLDA models."""

from .accumulators import Accumulators, SubstateStats, ZPosteriors
from .em import active_histogram, em_iteration, merge_starved_substates, train
from .estep import EStepResult, TrainingData, default_threads, estep, responsibilities, shard_bounds
from .init import init_model
from .mixup import mixup
from .mstep import (
    auxiliary,
    floor_weights,
    residual_energy,
    update_b,
    update_G,
    update_Lambda,
    update_U,
    update_weights,
)

__all__ = [
    "Accumulators",
    "EStepResult",
    "SubstateStats",
    "TrainingData",
    "ZPosteriors",
    "active_histogram",
    "auxiliary",
    "default_threads",
    "em_iteration",
    "estep",
    "floor_weights",
    "init_model",
    "merge_starved_substates",
    "mixup",
    "residual_energy",
    "responsibilities",
    "shard_bounds",
    "train",
    "update_G",
    "update_Lambda",
    "update_U",
    "update_b",
    "update_weights",
]
