"""Sufficient statistics gathered by the E-step.

Sub-states are addressed by a flat index ``g`` running over all (j, k) pairs
in state order (see :meth:`TiedPldaModel.substate_offsets`).

Both statistic sets add field by field, so shards can be accumulated
independently and merged. Merging in a fixed order is bit-exact.
"""

from dataclasses import dataclass, fields
from typing import Iterable, Optional, TypeVar

import numpy as np

T = TypeVar("T", bound="_Mergeable")


class _Mergeable:
    def merge(self: T, other: T) -> T:
        """Field-wise sum of two statistic sets."""
        values = {}
        for f in fields(self):
            a, b = getattr(self, f.name), getattr(other, f.name)
            values[f.name] = a + b
        return type(self)(**values)

    @classmethod
    def merge_all(cls, parts: Iterable[T]) -> Optional[T]:
        """Left fold of :meth:`merge` in the given order."""
        total = None
        for part in parts:
            total = part if total is None else total.merge(part)
        return total


@dataclass(frozen=True)
class SubstateStats(_Mergeable):
    """First-sweep statistics for the sub-state posteriors.

    Attributes:
        occupancy: ``sum_t gamma_tgm``, shape (G, M)
        residual_sums: ``sum_t gamma_tgm (y_t - U_m E[x_tgm])``, shape (G, M, d)
        loglik: ``sum_t P(j|y_t) log p(y_t | j)`` under the model entering the sweep
        frames: total state-posterior mass
    """

    occupancy: np.ndarray
    residual_sums: np.ndarray
    loglik: float = 0.0
    frames: float = 0.0

    @classmethod
    def zeros(cls, num_substates: int, M: int, d: int) -> "SubstateStats":
        return cls(occupancy=np.zeros((num_substates, M)), residual_sums=np.zeros((num_substates, M, d)))


@dataclass(frozen=True)
class Accumulators(_Mergeable):
    """Second-sweep raw moments used by the M-step.

    Attributes:
        occupancy: ``n_gm = sum_t gamma_tgm``, shape (G, M)
        y_sums: ``f_gm = sum_t gamma_tgm y_t``, shape (G, M, d)
        x_sums: ``s_gm = sum_t gamma_tgm E[x_tgm]``, shape (G, M, p)
        yy_diag: ``sum_{t,g} gamma_tgm y_t * y_t``, shape (M, d)
        xy: ``sum_{t,g} gamma_tgm E[x_tgm] y_t^T``, shape (M, p, d)
        xx: ``sum_{t,g} gamma_tgm E[x_tgm x_tgm^T]``, shape (M, p, p)
        loglik: ``sum_t P(j|y_t) log p(y_t | j)`` with the sub-state vectors
            used in the sweep
        frames: total state-posterior mass
    """

    occupancy: np.ndarray
    y_sums: np.ndarray
    x_sums: np.ndarray
    yy_diag: np.ndarray
    xy: np.ndarray
    xx: np.ndarray
    loglik: float = 0.0
    frames: float = 0.0

    @classmethod
    def zeros(cls, num_substates: int, M: int, d: int, p: int) -> "Accumulators":
        return cls(
            occupancy=np.zeros((num_substates, M)),
            y_sums=np.zeros((num_substates, M, d)),
            x_sums=np.zeros((num_substates, M, p)),
            yy_diag=np.zeros((M, d)),
            xy=np.zeros((M, p, d)),
            xx=np.zeros((M, p, p)),
        )

    @property
    def component_occupancy(self) -> np.ndarray:
        """``N_m``, shape (M,)."""
        return self.occupancy.sum(axis=0)

    @property
    def substate_occupancy(self) -> np.ndarray:
        """Occupancy per flat sub-state index, shape (G,)."""
        return self.occupancy.sum(axis=1)


@dataclass(frozen=True)
class ZPosteriors:
    """Sub-state posteriors solved between the two sweeps.

    Attributes:
        means: shape (G, q)
        covariances: shape (G, q, q)
        occupancy: first-sweep occupancy per sub-state, shape (G,)
    """

    means: np.ndarray
    covariances: np.ndarray
    occupancy: np.ndarray

    def second_moments(self) -> np.ndarray:
        """``E[z z^T]`` per sub-state, shape (G, q, q)."""
        return self.covariances + np.einsum("gi,gj->gij", self.means, self.means)
