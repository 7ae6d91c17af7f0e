"""Mixture-of-factor-analysers background model."""

from .mfa import BackgroundTrainer, component_log_joint, train_bg
from .selection import build_selection, select_components

__all__ = ["BackgroundTrainer", "build_selection", "component_log_joint", "select_components", "train_bg"]
