"""Low-rank-plus-diagonal Gaussians through the Woodbury identity.

For a covariance ``C = U U^T + diag(Lambda)`` with ``U`` of shape (d, p) the
factor ``L = Lambda^-1 U (I + U^T Lambda^-1 U)^(-1/2)`` gives

    C^-1 = Lambda^-1 - L L^T
    log det C = sum(log Lambda) + log det(I + U^T Lambda^-1 U)

so a density evaluation costs O(d p) instead of O(d^3).
"""

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from ..errors import NumericalError
from ..models.params import ComponentParams

LOG_2PI = float(np.log(2.0 * np.pi))


@dataclass(frozen=True)
class WoodburyFactor:
    """Inverse and log-determinant of ``U U^T + diag(Lambda)``.

    Attributes:
        L: shape (d, p), with ``(U U^T + Lambda)^-1 = Lambda^-1 - L L^T``
        logdet: log-determinant of ``U U^T + Lambda``
        inv_noise: ``1 / Lambda``, shape (d,)
    """

    L: np.ndarray
    logdet: float
    inv_noise: np.ndarray

    @property
    def dim(self) -> int:
        return self.inv_noise.shape[0]

    def inverse(self) -> np.ndarray:
        """Dense inverse covariance; only meant for small ``d``."""
        return np.diag(self.inv_noise) - self.L @ self.L.T

    def quadratic(self, residuals: np.ndarray) -> np.ndarray:
        """``r^T C^-1 r`` for each row (or trailing vector) of ``residuals``."""
        diagonal = np.einsum("...i,...i,i->...", residuals, residuals, self.inv_noise)
        projected = residuals @ self.L
        return diagonal - np.einsum("...i,...i->...", projected, projected)

    def log_density(self, residuals: np.ndarray) -> np.ndarray:
        """Log of the zero-mean Gaussian density at each residual vector."""
        return -0.5 * (self.dim * LOG_2PI + self.logdet + self.quadratic(residuals))


def woodbury_factor(loading: np.ndarray, noise: np.ndarray, floor: float = 0.0) -> WoodburyFactor:
    """Factor ``loading @ loading.T + diag(noise)``.

    The inverse square root of ``I + U^T Lambda^-1 U`` is taken through a
    symmetric eigendecomposition.

    Raises:
        NumericalError: a noise entry is below ``floor`` or not positive.
    """
    noise = np.asarray(noise, dtype=np.float64)
    loading = np.asarray(loading, dtype=np.float64)
    low = np.flatnonzero(~((noise >= floor) & (noise > 0.0)))
    if low.size:
        i = int(low[0])
        raise NumericalError(f"diagonal variance {noise[i]!r} at dimension {i} is below the floor {floor!r}")

    inv_noise = 1.0 / noise
    d, p = loading.shape
    if p == 0:
        return WoodburyFactor(L=np.zeros((d, 0)), logdet=float(np.sum(np.log(noise))), inv_noise=inv_noise)

    scaled = loading * inv_noise[:, None]
    inner = np.eye(p) + loading.T @ scaled
    eigvals, eigvecs = linalg.eigh(inner)
    inv_sqrt = (eigvecs / np.sqrt(eigvals)) @ eigvecs.T
    return WoodburyFactor(
        L=scaled @ inv_sqrt,
        logdet=float(np.sum(np.log(noise)) + np.sum(np.log(eigvals))),
        inv_noise=inv_noise,
    )


def woodbury(comp: ComponentParams) -> WoodburyFactor:
    """Woodbury factor of the marginal covariance ``U U^T + Lambda`` of a component."""
    return woodbury_factor(comp.U, comp.Lambda)
