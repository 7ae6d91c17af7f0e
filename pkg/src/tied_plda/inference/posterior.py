"""Gaussian posteriors of the frame variable x and the state variable z."""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy import linalg

from ..errors import DimensionMismatchError, NumericalError
from ..models.params import ComponentParams, TiedPldaModel
from .woodbury import LOG_2PI


@dataclass(frozen=True)
class GaussianPosterior:
    """``N(mean, precision^-1)``."""

    mean: np.ndarray
    precision: np.ndarray

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    @property
    def covariance(self) -> np.ndarray:
        factor = linalg.cho_factor(self.precision, lower=True)
        return linalg.cho_solve(factor, np.eye(self.dim))

    def second_moment(self) -> np.ndarray:
        """``E[v v^T] = cov + mean mean^T``."""
        return self.covariance + np.outer(self.mean, self.mean)

    def log_density(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(points)
        diff = points - self.mean
        _, logdet = np.linalg.slogdet(self.precision)
        quad = np.einsum("ti,ij,tj->t", diff, self.precision, diff)
        return 0.5 * (logdet - self.dim * LOG_2PI - quad)

    @classmethod
    def standard(cls, dim: int) -> "GaussianPosterior":
        return cls(mean=np.zeros(dim), precision=np.eye(dim))


def _solve_precision(precision: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    try:
        factor = linalg.cho_factor(precision, lower=True)
    except linalg.LinAlgError as exc:
        raise NumericalError(f"posterior precision is not positive definite: {exc}") from None
    return linalg.cho_solve(factor, rhs)


def _check_vector(value: np.ndarray, size: int, what: str) -> np.ndarray:
    value = np.asarray(value, dtype=np.float64)
    if value.shape != (size,):
        raise DimensionMismatchError(what, size, value.shape[0] if value.ndim == 1 else value.shape)
    if not np.all(np.isfinite(value)):
        raise NumericalError(f"{what} contains non-finite entries")
    return value


def posterior_x(comp: ComponentParams, z_bar: np.ndarray, y: np.ndarray) -> GaussianPosterior:
    """Posterior of the frame variable given the observation and a point estimate of z.

    Precision ``V = I + U^T Lambda^-1 U``; mean ``V^-1 U^T Lambda^-1 (y - G z_bar - b)``.
    The prior is ``N(0, I)``.
    """
    y = _check_vector(y, comp.d, "feature dimension")
    z_bar = _check_vector(z_bar, comp.q, "state-variable dimension")
    scaled = comp.U.T / comp.Lambda
    precision = np.eye(comp.p) + scaled @ comp.U
    mean = _solve_precision(precision, scaled @ (y - comp.G @ z_bar - comp.b))
    return GaussianPosterior(mean=mean, precision=precision)


def posterior_z_from_stats(
    components: Sequence[ComponentParams], occupancy: np.ndarray, residual_sums: np.ndarray
) -> GaussianPosterior:
    """Posterior of a sub-state vector from per-component statistics.

    Args:
        components: the M components
        occupancy: ``n_m = sum_t gamma_tm``, shape (M,)
        residual_sums: ``h_m = sum_t gamma_tm (y_t - U_m E[x_tm])``, shape (M, d)

    Returns:
        precision ``I + sum_m n_m G_m^T Lambda_m^-1 G_m`` and mean
        ``precision^-1 sum_m G_m^T Lambda_m^-1 (h_m - n_m b_m)``
    """
    q = components[0].q
    precision = np.eye(q)
    linear = np.zeros(q)
    for m, comp in enumerate(components):
        if occupancy[m] == 0.0:
            continue
        scaled = comp.G.T / comp.Lambda
        precision += occupancy[m] * (scaled @ comp.G)
        linear += scaled @ (residual_sums[m] - occupancy[m] * comp.b)
    return GaussianPosterior(mean=_solve_precision(precision, linear), precision=precision)


def posterior_z(
    model: TiedPldaModel,
    j: int,
    k: int,
    frames: Sequence[Tuple[np.ndarray, np.ndarray, np.ndarray]],
) -> GaussianPosterior:
    """Posterior of sub-state vector ``z_jk`` given frames assigned to it.

    Args:
        model: the model (only the components are used; ``j`` and ``k`` name
            the sub-state the frames belong to)
        j: state index
        k: sub-state index
        frames: ``(y, gamma, x_means)`` per frame, with ``gamma`` the
            responsibilities of sub-state ``k`` over the M components and
            ``x_means`` the (M, p) frame-variable means

    An empty frame list gives the prior ``N(0, I)``.
    """
    h = model.hyper
    if not 0 <= j < h.J or not 0 <= k < model.states[j].num_substates:
        raise IndexError(f"no sub-state ({j}, {k}) in the model")
    if not frames:
        return GaussianPosterior.standard(h.q)

    occupancy = np.zeros(h.M)
    residual_sums = np.zeros((h.M, h.d))
    for y, gamma, x_means in frames:
        y = _check_vector(y, h.d, "feature dimension")
        gamma = np.asarray(gamma, dtype=np.float64)
        if gamma.shape != (h.M,):
            raise DimensionMismatchError("responsibility count", h.M, gamma.shape[0])
        if np.any(gamma < 0.0) or np.any(gamma > 1.0):
            raise ValueError("responsibilities must lie in [0, 1]")
        x_means = np.asarray(x_means, dtype=np.float64).reshape(h.M, h.p)
        for m, comp in enumerate(model.components):
            occupancy[m] += gamma[m]
            residual_sums[m] += gamma[m] * (y - comp.U @ x_means[m])
    return posterior_z_from_stats(model.components, occupancy, residual_sums)
