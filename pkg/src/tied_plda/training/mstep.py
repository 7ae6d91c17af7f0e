"""Closed-form M-step updates and the auxiliary function they maximise.

For component ``m`` the auxiliary function is

    Q_m = -1/2 [ N_m sum_i log(2 pi Lambda_i) + sum_i D_i / Lambda_i ]

with ``D = diag(sum_t gamma_t E[(y_t - U x - G z - b)(y_t - U x - G z - b)^T])``.
Under the point treatment of z the expectation is over x only; under the
uncertainty treatment ``D`` also carries ``diag(G (sum_g n_g cov(z_g)) G^T)``.
Each update below is the exact maximiser of its own block given the current
values of the others:

* U, b maximise both forms
* G maximises the uncertainty form (it uses ``E[z z^T]``)
* Lambda maximises the point form

All quantities are computed from raw moments, so an update always sees the
latest companions.
"""

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from scipy import linalg

from ..config import RIDGE_SCALE
from ..models.params import ComponentParams, TiedPldaModel
from ..utils.logging import get_logger
from .accumulators import Accumulators, ZPosteriors

logger = get_logger(__name__)

LOG_2PI = float(np.log(2.0 * np.pi))


@dataclass(frozen=True)
class _ComponentMoments:
    """Per-component slices of the accumulators."""

    n: np.ndarray  # (G,)
    f: np.ndarray  # (G, d)
    s: np.ndarray  # (G, p)
    yy: np.ndarray  # (d,)
    xy: np.ndarray  # (p, d)
    xx: np.ndarray  # (p, p)

    @property
    def total(self) -> float:
        return float(self.n.sum())


def _moments(acc: Accumulators, m: int) -> _ComponentMoments:
    return _ComponentMoments(
        n=acc.occupancy[:, m],
        f=acc.y_sums[:, m],
        s=acc.x_sums[:, m],
        yy=acc.yy_diag[m],
        xy=acc.xy[m],
        xx=acc.xx[m],
    )


def solve_symmetric(matrix: np.ndarray, rhs: np.ndarray) -> Tuple[np.ndarray, bool]:
    """Solve ``matrix @ X = rhs`` for a symmetric positive semi-definite matrix.

    A ridge of ``RIDGE_SCALE * trace / size`` is added when the Cholesky
    factorisation fails.

    Returns:
        (solution, ridged)
    """
    try:
        return linalg.cho_solve(linalg.cho_factor(matrix, lower=True), rhs), False
    except linalg.LinAlgError:
        size = matrix.shape[0]
        scale = float(np.trace(matrix)) / size
        ridge = RIDGE_SCALE * (scale if scale > 0.0 else 1.0)
        logger.warning(f"Moment matrix of size {size} is singular; adding ridge {ridge:.3g}")
        regularised = matrix + ridge * np.eye(size)
        return linalg.cho_solve(linalg.cho_factor(regularised, lower=True), rhs), True


def _centres(z: ZPosteriors, comp: ComponentParams) -> np.ndarray:
    """``G z_g + b`` per sub-state, shape (G, d)."""
    return z.means @ comp.G.T + comp.b


def residual_energy(acc: Accumulators, z: ZPosteriors, m: int, comp: ComponentParams) -> np.ndarray:
    """``D`` of the auxiliary function (point treatment of z), shape (d,)."""
    mom = _moments(acc, m)
    centres = _centres(z, comp)
    centred = mom.yy - 2.0 * np.einsum("gd,gd->d", mom.f, centres) + np.einsum("g,gd,gd->d", mom.n, centres, centres)
    cross = mom.xy - mom.s.T @ centres  # (p, d)
    return (
        centred
        - 2.0 * np.einsum("dp,pd->d", comp.U, cross)
        + np.einsum("dp,pq,dq->d", comp.U, mom.xx, comp.U)
    )


def auxiliary(
    acc: Accumulators, z: ZPosteriors, m: int, comp: ComponentParams, z_uncertainty: bool = False
) -> float:
    """EM auxiliary function of component ``m`` evaluated at ``comp``."""
    mom = _moments(acc, m)
    energy = residual_energy(acc, z, m, comp)
    if z_uncertainty:
        spread = np.einsum("g,gab->ab", mom.n, z.covariances)
        energy = energy + np.einsum("dq,qr,dr->d", comp.G, spread, comp.G)
    return -0.5 * float(mom.total * np.sum(LOG_2PI + np.log(comp.Lambda)) + np.sum(energy / comp.Lambda))


def update_U(acc: Accumulators, z: ZPosteriors, m: int, comp: ComponentParams) -> Tuple[np.ndarray, bool]:
    """``U = [sum gamma (y - G z - b) E[x]^T] [sum gamma E[x x^T]]^-1``."""
    mom = _moments(acc, m)
    cross = mom.xy - mom.s.T @ _centres(z, comp)  # (p, d)
    solution, ridged = solve_symmetric(mom.xx, cross)
    return solution.T, ridged


def update_G(acc: Accumulators, z: ZPosteriors, m: int, comp: ComponentParams) -> Tuple[np.ndarray, bool]:
    """``G = [sum gamma (y - U x - b) E[z]^T] [sum gamma E[z z^T]]^-1``."""
    mom = _moments(acc, m)
    second = np.einsum("g,gab->ab", mom.n, z.second_moments())
    targets = mom.f - mom.s @ comp.U.T - mom.n[:, None] * comp.b  # (G, d)
    solution, ridged = solve_symmetric(second, z.means.T @ targets)  # (q, d)
    return solution.T, ridged


def update_b(acc: Accumulators, z: ZPosteriors, m: int, comp: ComponentParams) -> np.ndarray:
    """``b = sum gamma (y - U x - G z) / sum gamma``."""
    mom = _moments(acc, m)
    total = mom.f.sum(axis=0) - comp.U @ mom.s.sum(axis=0) - comp.G @ (mom.n @ z.means)
    return total / mom.total


def update_Lambda(
    acc: Accumulators, z: ZPosteriors, m: int, comp: ComponentParams, floor: np.ndarray
) -> Tuple[np.ndarray, int]:
    """``Lambda = diag(sum gamma (r r^T + U V^-1 U^T)) / sum gamma``, floored.

    Returns:
        (Lambda, number of floored entries)
    """
    mom = _moments(acc, m)
    variance = residual_energy(acc, z, m, comp) / mom.total
    floored = variance < floor
    # A zero floor still has to leave the variances strictly positive.
    variance = np.where(floored, floor, variance)
    variance = np.maximum(variance, np.finfo(np.float64).tiny)
    return variance, int(np.count_nonzero(floored))


def floor_weights(weights: np.ndarray, floor: float) -> Tuple[np.ndarray, int]:
    """Normalise ``weights`` and raise entries below ``floor`` to it.

    Floored entries are fixed at ``floor`` and the remaining mass is shared
    proportionally among the rest, repeating until no free entry falls below
    the floor.

    Returns:
        (weights, number of floored entries)
    """
    weights = np.asarray(weights, dtype=np.float64) / float(np.sum(weights))
    if floor <= 0.0:
        return weights, 0
    if floor * weights.shape[0] >= 1.0:
        raise ValueError(f"weight floor {floor} is not below 1/{weights.shape[0]}")
    fixed = np.zeros(weights.shape[0], dtype=bool)
    while True:
        low = (weights < floor) & ~fixed
        if not low.any():
            break
        fixed |= low
        free = ~fixed
        weights[free] *= (1.0 - floor * np.count_nonzero(fixed)) / weights[free].sum()
        weights[fixed] = floor
    return weights, int(np.count_nonzero(fixed))


def update_weights(
    acc: Accumulators, model: TiedPldaModel, floor: float
) -> Tuple[List[Tuple[np.ndarray, np.ndarray]], int]:
    """Sub-state and component weights from occupancies.

    ``c_jk = sum_m n_jkm / n_j`` and ``pi_jm = sum_k n_jkm / n_j``; ``pi`` is
    floored. For the mixture family sub-state ``k`` is component ``k`` and
    ``pi`` equals the floored ``c``. States without occupancy keep their
    weights.

    Returns:
        ([(c_j, pi_j) per state], number of floored weights)
    """
    offsets = model.substate_offsets()
    result: List[Tuple[np.ndarray, np.ndarray]] = []
    floored_total = 0
    for j, state in enumerate(model.states):
        n = acc.occupancy[offsets[j]:offsets[j + 1]]
        total = float(n.sum())
        if total <= 0.0:
            result.append((state.c.copy(), state.pi.copy()))
            continue
        c = n.sum(axis=1) / total
        if model.is_mixture:
            c, floored = floor_weights(c, floor)
            result.append((c, c.copy()))
        else:
            pi, floored = floor_weights(n.sum(axis=0) / total, floor)
            result.append((c / c.sum(), pi))
        floored_total += floored
    return result, floored_total
