"""Container for the mixture-of-factor-analysers background model."""

from dataclasses import dataclass

import numpy as np

from ..errors import ModelInvariantError
from .params import WEIGHT_SUM_TOLERANCE


@dataclass(frozen=True, eq=False)
class BackgroundModel:
    """Mixture of factor analysers.

    Component ``m`` has density ``N(y; means[m], loadings[m] loadings[m]^T + diag(noise[m]))``
    and prior ``weights[m]``.

    Attributes:
        means: shape (M, d)
        loadings: shape (M, d, r)
        noise: shape (M, d), strictly positive
        weights: shape (M,)
    """

    means: np.ndarray
    loadings: np.ndarray
    noise: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        means = np.array(self.means, dtype=np.float64)
        loadings = np.array(self.loadings, dtype=np.float64)
        noise = np.array(self.noise, dtype=np.float64)
        weights = np.array(self.weights, dtype=np.float64)
        if means.ndim != 2:
            raise ModelInvariantError("background means must have shape (M, d)")
        M, d = means.shape
        if M < 1:
            raise ModelInvariantError("background model needs at least one component")
        if loadings.ndim != 3 or loadings.shape[:2] != (M, d):
            raise ModelInvariantError(f"background loadings have shape {loadings.shape}, expected ({M}, {d}, r)")
        if noise.shape != (M, d):
            raise ModelInvariantError(f"background noise has shape {noise.shape}, expected ({M}, {d})")
        if weights.shape != (M,):
            raise ModelInvariantError(f"background weights have shape {weights.shape}, expected ({M},)")
        for name, array in (("means", means), ("loadings", loadings), ("noise", noise), ("weights", weights)):
            if not np.all(np.isfinite(array)):
                raise ModelInvariantError(f"background {name} contain non-finite entries")
        if np.any(noise <= 0.0):
            raise ModelInvariantError("background noise variances must be strictly positive")
        if np.any(weights < 0.0) or abs(float(weights.sum()) - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise ModelInvariantError("background weights not normalized")
        for array in (means, loadings, noise, weights):
            array.setflags(write=False)
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "loadings", loadings)
        object.__setattr__(self, "noise", noise)
        object.__setattr__(self, "weights", weights)

    @property
    def num_components(self) -> int:
        return self.means.shape[0]

    @property
    def dim(self) -> int:
        return self.means.shape[1]

    @property
    def rank(self) -> int:
        return self.loadings.shape[2]

    def equals(self, other: "BackgroundModel") -> bool:
        return all(
            np.array_equal(getattr(self, name), getattr(other, name))
            for name in ("means", "loadings", "noise", "weights")
        )
