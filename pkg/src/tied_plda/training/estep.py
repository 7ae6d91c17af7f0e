"""Two-sweep E-step with shard-and-merge parallelism.

Sweep 1 scores every labelled frame with the current sub-state vectors,
collects the statistics of the sub-state posteriors and solves them. Sweep 2
rescores with the new sub-state means and gathers the raw moments the M-step
consumes.

Work is split over contiguous shards of label entries. Each worker fills
private statistics; the partial results are summed afterwards. In
deterministic mode shard boundaries are fixed (``SHARD_SIZE`` entries) and
partials are merged in shard order, so results do not depend on the thread
count or on scheduling.
"""

import os
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Tuple

import numpy as np
from scipy.special import logsumexp

from ..config import SHARD_SIZE
from ..data.labels import LabelSequence
from ..errors import DimensionMismatchError, NumericalError
from ..inference.cache import ScoringCache, prepare_scoring
from ..inference.likelihood import (
    LikelihoodMode,
    component_log_densities,
    frame_residuals,
    joint_log_terms,
    selection_mask,
    x_posterior_means,
)
from ..models.params import TiedPldaModel
from ..utils.logging import get_logger
from .accumulators import Accumulators, SubstateStats, ZPosteriors

logger = get_logger(__name__)


@dataclass
class TrainingData:
    """Features with their state labels and optional component selection.

    Attributes:
        features: shape (T, d)
        labels: state posteriors for the T frames
        selection: optional (T, N) component indices per frame
        data_variance: per-dimension variance used as the variance floor
            reference; ones when not supplied
    """

    features: np.ndarray
    labels: LabelSequence
    selection: Optional[np.ndarray] = None
    data_variance: Optional[np.ndarray] = None

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        if self.features.ndim != 2:
            raise DimensionMismatchError("feature matrix rank", 2, self.features.ndim)
        if self.labels.num_frames != self.features.shape[0]:
            raise DimensionMismatchError("frame count", self.features.shape[0], self.labels.num_frames, "labels")
        if self.selection is not None:
            self.selection = np.asarray(self.selection, dtype=np.int64)
            if self.selection.shape[0] != self.features.shape[0]:
                raise DimensionMismatchError("frame count", self.features.shape[0], self.selection.shape[0], "selection")

    @property
    def num_frames(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    def variance_reference(self) -> np.ndarray:
        if self.data_variance is None:
            return np.ones(self.dim)
        return np.asarray(self.data_variance, dtype=np.float64)

    def check_model(self, model: TiedPldaModel) -> None:
        if self.dim != model.hyper.d:
            raise DimensionMismatchError("feature dimension", model.hyper.d, self.dim, "features")
        self.labels.validate(model.hyper.J, self.num_frames)

    def mask(self, num_components: int) -> Optional[np.ndarray]:
        if self.selection is None:
            return None
        return selection_mask(self.selection, num_components)


@dataclass(frozen=True)
class EStepResult:
    """Output of :func:`estep`.

    Attributes:
        accumulators: second-sweep moments
        z: sub-state posteriors from the first sweep
        loglik: first-sweep total log-likelihood (the model entering the E-step)
        frames: total state-posterior mass
    """

    accumulators: Accumulators
    z: ZPosteriors
    loglik: float
    frames: float

    @property
    def avg_loglik(self) -> float:
        return self.loglik / self.frames


@dataclass(frozen=True)
class _Block:
    """Scored frames of one state inside a shard."""

    state: int
    first: int  # flat index of the state's first sub-state
    Y: np.ndarray
    gamma: np.ndarray  # (n, K, M), scaled by the state-posterior mass
    x_bar: np.ndarray  # (n, K, M, p)
    loglik: float
    mass: float


def default_threads() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def shard_bounds(num_entries: int, threads: int, deterministic: bool) -> List[Tuple[int, int]]:
    """Contiguous ``[lo, hi)`` ranges of label entries."""
    if num_entries == 0:
        return []
    size = SHARD_SIZE if deterministic else max(1, -(-num_entries // max(threads, 1)))
    return [(lo, min(lo + size, num_entries)) for lo in range(0, num_entries, size)]


def _score_state(
    cache: ScoringCache,
    j: int,
    Y: np.ndarray,
    z_state: np.ndarray,
    mode: LikelihoodMode,
    allowed: Optional[np.ndarray],
    frame_idx: np.ndarray,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    residuals = frame_residuals(cache, Y, z_state)
    x_bar = x_posterior_means(cache, residuals)
    densities = component_log_densities(cache, residuals, mode, x_bar)
    terms = joint_log_terms(cache, j, densities, allowed)
    with np.errstate(divide="ignore", invalid="ignore"):
        totals = logsumexp(terms.reshape(terms.shape[0], -1), axis=1)
    dead = np.flatnonzero(~np.isfinite(totals))
    if dead.size:
        raise NumericalError(
            f"frame {int(frame_idx[dead[0]])}: every selected component of state {j} has zero likelihood"
        )
    return np.exp(terms - totals[:, None, None]), x_bar, totals


def responsibilities(
    model: TiedPldaModel,
    j: int,
    Y: np.ndarray,
    masses: Optional[np.ndarray] = None,
    mode: LikelihoodMode = LikelihoodMode.UNCERTAINTY,
    selection: Optional[np.ndarray] = None,
    cache: Optional[ScoringCache] = None,
) -> np.ndarray:
    """``gamma_tkm`` of frames ``Y`` (T, d) labelled with state ``j``; shape (T, K, M)."""
    cache = cache or prepare_scoring(model)
    Y = np.atleast_2d(np.asarray(Y, dtype=np.float64))
    masses = np.ones(Y.shape[0]) if masses is None else np.asarray(masses, dtype=np.float64)
    allowed = None if selection is None else selection_mask(selection, model.hyper.M)
    gamma, _, _ = _score_state(cache, j, Y, model.states[j].z, mode, allowed, np.arange(Y.shape[0]))
    return gamma * masses[:, None, None]


def _blocks(
    cache: ScoringCache,
    data: TrainingData,
    mask: Optional[np.ndarray],
    z: np.ndarray,
    lo: int,
    hi: int,
    mode: LikelihoodMode,
) -> Iterator[_Block]:
    offsets = cache.model.substate_offsets()
    labels = data.labels
    frames, states, masses = labels.frames[lo:hi], labels.states[lo:hi], labels.masses[lo:hi]
    for j in np.unique(states):
        j = int(j)
        pick = states == j
        frame_idx, weight = frames[pick], masses[pick]
        Y = data.features[frame_idx]
        gamma, x_bar, totals = _score_state(
            cache, j, Y, z[offsets[j]:offsets[j + 1]], mode,
            None if mask is None else mask[frame_idx], frame_idx,
        )
        yield _Block(
            state=j,
            first=int(offsets[j]),
            Y=Y,
            gamma=gamma * weight[:, None, None],
            x_bar=x_bar,
            loglik=float(weight @ totals),
            mass=float(weight.sum()),
        )


def _first_sweep_shard(cache, data, mask, z, mode, bounds) -> SubstateStats:
    h = cache.model.hyper
    stats = SubstateStats.zeros(cache.model.total_substates, h.M, h.d)
    loglik, mass = 0.0, 0.0
    for block in _blocks(cache, data, mask, z, *bounds, mode):
        K = block.gamma.shape[1]
        rows = slice(block.first, block.first + K)
        weighted_x = np.einsum("tkm,tkmp->kmp", block.gamma, block.x_bar)
        stats.occupancy[rows] += block.gamma.sum(axis=0)
        stats.residual_sums[rows] += (
            np.einsum("tkm,td->kmd", block.gamma, block.Y) - np.einsum("mdp,kmp->kmd", cache.U, weighted_x)
        )
        loglik += block.loglik
        mass += block.mass
    return SubstateStats(stats.occupancy, stats.residual_sums, loglik, mass)


def _second_sweep_shard(cache, data, mask, z, mode, bounds) -> Accumulators:
    h = cache.model.hyper
    acc = Accumulators.zeros(cache.model.total_substates, h.M, h.d, h.p)
    loglik, mass = 0.0, 0.0
    for block in _blocks(cache, data, mask, z, *bounds, mode):
        K = block.gamma.shape[1]
        rows = slice(block.first, block.first + K)
        per_component = block.gamma.sum(axis=1)  # (n, M)
        gx = (block.gamma[..., None] * block.x_bar).sum(axis=1)  # (n, M, p)
        acc.occupancy[rows] += block.gamma.sum(axis=0)
        acc.y_sums[rows] += np.einsum("tkm,td->kmd", block.gamma, block.Y)
        acc.x_sums[rows] += np.einsum("tkm,tkmp->kmp", block.gamma, block.x_bar)
        acc.yy_diag[...] += per_component.T @ (block.Y * block.Y)
        acc.xy[...] += np.einsum("tmp,td->mpd", gx, block.Y)
        acc.xx[...] += (
            np.einsum("tkm,tkmp,tkmq->mpq", block.gamma, block.x_bar, block.x_bar)
            + per_component.sum(axis=0)[:, None, None] * cache.x_cov
        )
        loglik += block.loglik
        mass += block.mass
    return Accumulators(
        acc.occupancy, acc.y_sums, acc.x_sums, acc.yy_diag, acc.xy, acc.xx, loglik, mass
    )


def _run_shards(fn: Callable, bounds: List[Tuple[int, int]], threads: int, deterministic: bool, merge_all):
    if threads <= 1 or len(bounds) <= 1:
        return merge_all(fn(b) for b in bounds)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        if deterministic:
            return merge_all(pool.map(fn, bounds))
        futures = [pool.submit(fn, b) for b in bounds]
        return merge_all(f.result() for f in as_completed(futures))


def solve_substate_posteriors(cache: ScoringCache, stats: SubstateStats, current_z: np.ndarray) -> ZPosteriors:
    """Posteriors of every sub-state vector from first-sweep statistics.

    Sub-states without occupancy keep their current vector.
    """
    q = cache.model.hyper.q
    n = stats.occupancy
    precision = np.eye(q)[None] + np.einsum("gm,mab->gab", n, cache.z_gram)
    linear = np.einsum("mqd,gmd->gq", cache.z_proj, stats.residual_sums - n[:, :, None] * cache.b[None])
    covariances = np.linalg.inv(precision)
    covariances = 0.5 * (covariances + np.swapaxes(covariances, 1, 2))
    means = np.einsum("gab,gb->ga", covariances, linear)
    occupancy = n.sum(axis=1)
    idle = occupancy <= 0.0
    means[idle] = current_z[idle]
    return ZPosteriors(means=means, covariances=covariances, occupancy=occupancy)


def estep(
    model: TiedPldaModel,
    data: TrainingData,
    mode: LikelihoodMode = LikelihoodMode.UNCERTAINTY,
    threads: int = 1,
    deterministic: bool = True,
    cache: Optional[ScoringCache] = None,
) -> EStepResult:
    """Gather the statistics of one EM iteration.

    Responsibilities are ``gamma_tkm = P(j|y_t) w_jkm p(y_t|j,k,m) / p(y_t|j)``
    over the components selected for the frame.

    Raises:
        NumericalError: the data carries no state-posterior mass ("no frames"),
            or some frame has zero likelihood under every selected component.
    """
    data.check_model(model)
    if data.labels.num_entries == 0 or float(data.labels.masses.sum()) <= 0.0:
        raise NumericalError("no frames to train on")

    cache = cache or prepare_scoring(model)
    mask = data.mask(model.hyper.M)
    current_z = np.concatenate([state.z for state in model.states])
    bounds = shard_bounds(data.labels.num_entries, threads, deterministic)

    first = _run_shards(
        lambda b: _first_sweep_shard(cache, data, mask, current_z, mode, b),
        bounds, threads, deterministic, SubstateStats.merge_all,
    )
    z = solve_substate_posteriors(cache, first, current_z)
    acc = _run_shards(
        lambda b: _second_sweep_shard(cache, data, mask, z.means, mode, b),
        bounds, threads, deterministic, Accumulators.merge_all,
    )
    logger.debug(
        f"E-step over {len(bounds)} shard(s): avg loglik {first.loglik / first.frames:.6f} -> "
        f"{acc.loglik / acc.frames:.6f} after sub-state update"
    )
    return EStepResult(accumulators=acc, z=z, loglik=first.loglik, frames=first.frames)
