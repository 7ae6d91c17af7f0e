"""Evaluation metrics, the diagonal-Gaussian baseline and parameter tables."""

from .metrics import (
    DiagonalGaussianBaseline,
    confusion_matrix,
    evaluate,
    fit_diagonal_baseline,
    held_out_loglik,
    labelled_loglik,
)
from .tables import format_param_table, param_table, param_table_tsv

__all__ = [
    "DiagonalGaussianBaseline",
    "confusion_matrix",
    "evaluate",
    "fit_diagonal_baseline",
    "format_param_table",
    "held_out_loglik",
    "labelled_loglik",
    "param_table",
    "param_table_tsv",
]
