"""Tied PLDA - acoustic models with state variables tied across mixture components."""

__version__ = "0.1.0"

# Import main components for easier access
from .models.params import Hyperparams, ModelFamily, TiedPldaModel, count_params, new_model
from .inference.likelihood import LikelihoodMode, classify_frame, loglik_point, loglik_uncertainty
from .training.em import train
from .storage import read_model, write_model

__all__ = [
    "Hyperparams",
    "LikelihoodMode",
    "ModelFamily",
    "TiedPldaModel",
    "classify_frame",
    "count_params",
    "loglik_point",
    "loglik_uncertainty",
    "new_model",
    "read_model",
    "train",
    "write_model",
]
