"""Per-model quantities reused by every batch scoring pass."""

from dataclasses import dataclass

import numpy as np

from ..models.params import TiedPldaModel
from .woodbury import woodbury


@dataclass(frozen=True)
class ScoringCache:
    """Stacked per-component factors of a model.

    Attributes:
        model: the model the cache was built from
        U, G, b: stacked loadings and biases, shapes (M, d, p), (M, d, q), (M, d)
        inv_noise: ``1 / Lambda_m``, shape (M, d)
        L: Woodbury factors, shape (M, d, p)
        logdet: ``log det(U_m U_m^T + Lambda_m)``, shape (M,)
        log_noise_sum: ``sum(log Lambda_m)``, shape (M,)
        x_cov: posterior covariance ``V_m^-1`` of x, shape (M, p, p)
        x_proj: ``V_m^-1 U_m^T Lambda_m^-1``, shape (M, p, d)
        z_proj: ``G_m^T Lambda_m^-1``, shape (M, q, d)
        z_gram: ``G_m^T Lambda_m^-1 G_m``, shape (M, q, q)
    """

    model: TiedPldaModel
    U: np.ndarray
    G: np.ndarray
    b: np.ndarray
    inv_noise: np.ndarray
    L: np.ndarray
    logdet: np.ndarray
    log_noise_sum: np.ndarray
    x_cov: np.ndarray
    x_proj: np.ndarray
    z_proj: np.ndarray
    z_gram: np.ndarray

    def state_means(self, z: np.ndarray) -> np.ndarray:
        """``G_m z_k + b_m`` for sub-state vectors ``z`` (K, q); shape (K, M, d)."""
        return np.einsum("mdq,kq->kmd", self.G, z) + self.b[None, :, :]


def prepare_scoring(model: TiedPldaModel) -> ScoringCache:
    """Factorise every component once."""
    factors = [woodbury(comp) for comp in model.components]
    inv_noise = np.stack([f.inv_noise for f in factors])
    U = np.stack([comp.U for comp in model.components])
    G = np.stack([comp.G for comp in model.components])
    p = model.hyper.p

    scaled_U = np.swapaxes(U, 1, 2) * inv_noise[:, None, :]
    x_precision = np.eye(p)[None] + scaled_U @ U
    x_cov = np.linalg.inv(x_precision)
    x_cov = 0.5 * (x_cov + np.swapaxes(x_cov, 1, 2))
    z_proj = np.swapaxes(G, 1, 2) * inv_noise[:, None, :]

    return ScoringCache(
        model=model,
        U=U,
        G=G,
        b=np.stack([comp.b for comp in model.components]),
        inv_noise=inv_noise,
        L=np.stack([f.L for f in factors]),
        logdet=np.array([f.logdet for f in factors]),
        log_noise_sum=np.array([np.sum(np.log(comp.Lambda)) for comp in model.components]),
        x_cov=x_cov,
        x_proj=x_cov @ scaled_U,
        z_proj=z_proj,
        z_gram=z_proj @ G,
    )
