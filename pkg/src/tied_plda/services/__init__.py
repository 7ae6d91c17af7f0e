"""Services between the command line and the library."""

from .scoring_service import ClassificationResult, ScoringService, model_summary_rows
from .training_service import TrainingService, hyperparams_from_flags

__all__ = [
    "ClassificationResult",
    "ScoringService",
    "TrainingService",
    "hyperparams_from_flags",
    "model_summary_rows",
]
