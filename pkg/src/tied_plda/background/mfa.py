"""Mixture-of-factor-analysers background model training.

EM follows the usual joint regression of loading and mean on the augmented
latent vector ``[E[w]; 1]``; the noise update then uses the fitted
regression. Means are seeded by k-means++ style randomised frame selection.
"""

from typing import List, Optional, Tuple

import numpy as np
from scipy import linalg
from scipy.special import logsumexp

from ..errors import DataFormatError, UsageError
from ..inference.woodbury import woodbury_factor
from ..models.background import BackgroundModel
from ..utils.logging import get_logger

logger = get_logger(__name__)

INIT_LOADING_SCALE = 0.1


class BackgroundTrainer:
    """Trains a background model and keeps the per-iteration log-likelihoods.

    Attributes:
        history: average per-frame log-likelihood of the initial model and
            of the model after each iteration
    """

    def __init__(
        self,
        num_components: int,
        rank: int,
        iterations: int = 20,
        seed: int = 0,
        variance_floor_scale: float = 1e-6,
    ):
        if num_components < 1:
            raise UsageError(f"background model needs at least one component, got {num_components}")
        if rank < 0:
            raise UsageError(f"loading rank must be non-negative, got {rank}")
        if iterations < 0:
            raise UsageError(f"iteration count must be non-negative, got {iterations}")
        self.num_components = num_components
        self.rank = rank
        self.iterations = iterations
        self.seed = seed
        self.variance_floor_scale = variance_floor_scale
        self.history: List[float] = []

    def _check(self, Y: np.ndarray) -> np.ndarray:
        Y = np.asarray(Y, dtype=np.float64)
        if Y.ndim != 2:
            raise DataFormatError(f"features must be a matrix, got shape {Y.shape}")
        T, d = Y.shape
        if self.rank > d:
            raise UsageError(f"loading rank {self.rank} exceeds feature dimension {d}")
        if T < self.num_components:
            raise DataFormatError(f"{T} frames are fewer than the {self.num_components} components requested")
        return Y

    def initialise(self, Y: np.ndarray) -> BackgroundModel:
        """Seed means with k-means++ frame selection; small random loadings; noise = data variance."""
        Y = self._check(Y)
        rng = np.random.default_rng(self.seed)
        T, d = Y.shape
        M = self.num_components

        chosen = [int(rng.integers(T))]
        nearest = np.sum((Y - Y[chosen[0]]) ** 2, axis=1)
        for _ in range(1, M):
            total = nearest.sum()
            if total > 0.0:
                index = int(rng.choice(T, p=nearest / total))
            else:
                index = int(rng.integers(T))
            chosen.append(index)
            nearest = np.minimum(nearest, np.sum((Y - Y[index]) ** 2, axis=1))

        variance = np.maximum(Y.var(axis=0), self._floor(Y))
        loadings = rng.normal(0.0, INIT_LOADING_SCALE, size=(M, d, self.rank)) * np.sqrt(variance)[None, :, None]
        return BackgroundModel(
            means=Y[chosen],
            loadings=loadings,
            noise=np.tile(variance, (M, 1)),
            weights=np.full(M, 1.0 / M),
        )

    def _floor(self, Y: np.ndarray) -> np.ndarray:
        return self.variance_floor_scale * np.maximum(Y.var(axis=0), np.finfo(np.float64).tiny)

    def step(self, bg: BackgroundModel, Y: np.ndarray) -> Tuple[BackgroundModel, float]:
        """One EM iteration. Returns the new model and the average log-likelihood of ``bg``."""
        T, d = Y.shape
        M, r = bg.num_components, bg.rank
        floor = self._floor(Y)
        Y_sq = Y * Y

        log_joint = component_log_joint(bg, Y)
        latent_means = np.empty((M, T, r))
        latent_covs = np.empty((M, r, r))
        for m in range(M):
            W, psi = bg.loadings[m], bg.noise[m]
            centred = Y - bg.means[m]
            scaled = W / psi[:, None]
            cov = linalg.inv(np.eye(r) + W.T @ scaled) if r else np.zeros((0, 0))
            latent_covs[m] = cov
            latent_means[m] = centred @ scaled @ cov

        totals = logsumexp(log_joint, axis=1)
        posteriors = np.exp(log_joint - totals[:, None])
        occupancy = posteriors.sum(axis=0)

        means = bg.means.copy()
        loadings = bg.loadings.copy()
        noise = bg.noise.copy()
        for m in range(M):
            if occupancy[m] <= 0.0:
                logger.warning(f"Background component {m} has zero occupancy; keeping its parameters")
                continue
            augmented = np.hstack([latent_means[m], np.ones((T, 1))])
            weighted = posteriors[:, m][:, None] * augmented
            cross = weighted.T @ Y  # (r+1, d)
            second = weighted.T @ augmented
            second[:r, :r] += occupancy[m] * latent_covs[m]
            solution = linalg.solve(second, cross, assume_a="sym")
            loadings[m] = solution[:r].T
            means[m] = solution[r]
            psi = (posteriors[:, m] @ Y_sq - np.sum(solution * cross, axis=0)) / occupancy[m]
            noise[m] = np.maximum(psi, floor)

        weights = occupancy / occupancy.sum()
        new_bg = BackgroundModel(means=means, loadings=loadings, noise=noise, weights=weights)
        return new_bg, float(totals.mean())

    def average_loglik(self, bg: BackgroundModel, Y: np.ndarray) -> float:
        return float(np.mean(logsumexp(component_log_joint(bg, Y), axis=1)))

    def fit(self, Y: np.ndarray, initial: Optional[BackgroundModel] = None) -> BackgroundModel:
        Y = self._check(Y)
        bg = initial if initial is not None else self.initialise(Y)
        self.history = []
        for iteration in range(self.iterations):
            bg, avg = self.step(bg, Y)
            self.history.append(avg)
            logger.info(
                f"Background iteration {iteration}: avg loglik {avg:.6f}",
                extra={"metrics": {"iteration": iteration, "avg_loglik": avg}},
            )
        self.history.append(self.average_loglik(bg, Y))
        return bg


def component_log_joint(bg: BackgroundModel, Y: np.ndarray) -> np.ndarray:
    """``log omega_m + log N(y_t; mu_m, W_m W_m^T + psi_m)``, shape (T, M)."""
    out = np.empty((Y.shape[0], bg.num_components))
    for m in range(bg.num_components):
        factor = woodbury_factor(bg.loadings[m], bg.noise[m])
        with np.errstate(divide="ignore"):
            out[:, m] = np.log(bg.weights[m]) + factor.log_density(Y - bg.means[m])
    return out


def train_bg(
    features: np.ndarray,
    num_components: int,
    rank: int,
    iterations: int = 20,
    seed: int = 0,
) -> BackgroundModel:
    """Train a background model by EM; see :class:`BackgroundTrainer`."""
    return BackgroundTrainer(num_components, rank, iterations, seed).fit(features)
