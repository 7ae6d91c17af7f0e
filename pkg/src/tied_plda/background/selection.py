"""Per-frame component pre-selection with the background model."""

import numpy as np

from ..errors import DimensionMismatchError, UsageError
from ..models.background import BackgroundModel
from .mfa import component_log_joint

# Frames scored per block when building a selection table.
SELECTION_BLOCK = 8192


def _check_count(bg: BackgroundModel, n: int) -> None:
    if not 1 <= n <= bg.num_components:
        raise UsageError(f"selection size {n} must lie in [1, {bg.num_components}]")


def select_components(bg: BackgroundModel, y: np.ndarray, n: int) -> np.ndarray:
    """Indices of the ``n`` components with the highest ``omega_m N(y; mu_m, W_m W_m^T + psi_m)``.

    Sorted by descending score; equal scores keep index order.
    """
    return build_selection(bg, np.asarray(y, dtype=np.float64)[None], n)[0]


def build_selection(bg: BackgroundModel, Y: np.ndarray, n: int) -> np.ndarray:
    """Top-``n`` component indices for every frame, shape (T, n)."""
    _check_count(bg, n)
    Y = np.asarray(Y, dtype=np.float64)
    if Y.ndim != 2 or Y.shape[1] != bg.dim:
        raise DimensionMismatchError("feature dimension", bg.dim, Y.shape[-1], "background model")
    out = np.empty((Y.shape[0], n), dtype=np.int64)
    for start in range(0, Y.shape[0], SELECTION_BLOCK):
        scores = component_log_joint(bg, Y[start:start + SELECTION_BLOCK])
        order = np.argsort(-scores, axis=1, kind="stable")
        out[start:start + SELECTION_BLOCK] = order[:, :n]
    return out
