"""Configuration for tied-plda training."""

from .config import (
    RIDGE_SCALE,
    SHARD_SIZE,
    STARVATION_OCCUPANCY,
    STARVATION_PATIENCE,
    TrainingConfig,
    load_training_config,
    parse_training_config,
)

__all__ = [
    "RIDGE_SCALE",
    "SHARD_SIZE",
    "STARVATION_OCCUPANCY",
    "STARVATION_PATIENCE",
    "TrainingConfig",
    "load_training_config",
    "parse_training_config",
]
