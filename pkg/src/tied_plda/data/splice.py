"""Context splicing of feature frames."""

import numpy as np

from ..errors import DataFormatError, UsageError


def splice(features: np.ndarray, context: int) -> np.ndarray:
    """Concatenate frames ``t - context ... t + context`` for every ``t``.

    Frames beyond either end are replaced by the first or last frame, so
    the frame count is unchanged. Output dimension is ``d * (2 * context + 1)``.
    """
    if context < 0:
        raise UsageError(f"context must be non-negative, got {context}")
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2 or features.shape[0] == 0:
        raise DataFormatError("cannot splice an empty feature matrix")
    T = features.shape[0]
    padded = np.pad(features, ((context, context), (0, 0)), mode="edge")
    return np.hstack([padded[offset:offset + T] for offset in range(2 * context + 1)])


def spliced_dim(dim: int, context: int) -> int:
    return dim * (2 * context + 1)
