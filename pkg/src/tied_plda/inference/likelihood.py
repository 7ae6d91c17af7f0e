"""State-level frame likelihoods and frame classification.

A frame's likelihood under state ``j`` is the mixture

    p(y | j) = sum_{k,m} c_jk pi_jm N(y; mu_jkm, C_jkm)

where the point estimate uses ``mu = U_m x_bar + G_m z_jk + b_m`` and
``C = Lambda_m``, and the uncertainty estimate marginalises x, giving
``mu = G_m z_jk + b_m`` and ``C = U_m U_m^T + Lambda_m``. Sums are taken in
the log domain.
"""

from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple, TypeVar

import numpy as np
from scipy.special import logsumexp

from ..errors import DimensionMismatchError, NumericalError, UsageError
from ..models.params import TiedPldaModel
from .cache import ScoringCache, prepare_scoring
from .woodbury import LOG_2PI

# Frames scored per block in batch classification.
SCORING_BLOCK = 4096

R = TypeVar("R")


class LikelihoodMode(str, Enum):
    POINT = "point"
    UNCERTAINTY = "uncertainty"


@dataclass(frozen=True)
class FrameScore:
    """Per-(k, m) log joint terms of one frame under one state.

    Attributes:
        terms: ``log w_jkm + log N(y; ...)``, shape (K, M)
        total: log-sum-exp of ``terms``
        best: the (k, m) pair with the largest term
    """

    terms: np.ndarray
    total: float
    best: Tuple[int, int]

    @classmethod
    def from_terms(cls, terms: np.ndarray) -> "FrameScore":
        flat = int(np.argmax(terms))
        k, m = np.unravel_index(flat, terms.shape)
        return cls(terms=terms, total=float(logsumexp(terms)), best=(int(k), int(m)))


def frame_residuals(cache: ScoringCache, Y: np.ndarray, z: np.ndarray) -> np.ndarray:
    """``y_t - G_m z_k - b_m``, shape (T, K, M, d)."""
    return Y[:, None, None, :] - cache.state_means(z)[None]


def x_posterior_means(cache: ScoringCache, residuals: np.ndarray) -> np.ndarray:
    """Posterior means of x for residuals of shape (T, K, M, d); shape (T, K, M, p)."""
    return np.einsum("mpd,tkmd->tkmp", cache.x_proj, residuals)


def component_log_densities(
    cache: ScoringCache,
    residuals: np.ndarray,
    mode: LikelihoodMode = LikelihoodMode.UNCERTAINTY,
    x_bars: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Gaussian log densities for residuals (T, K, M, d); shape (T, K, M)."""
    d = residuals.shape[-1]
    if LikelihoodMode(mode) is LikelihoodMode.UNCERTAINTY:
        diagonal = np.einsum("tkmd,tkmd,md->tkm", residuals, residuals, cache.inv_noise)
        projected = np.einsum("tkmd,mdp->tkmp", residuals, cache.L)
        quad = diagonal - np.einsum("tkmp,tkmp->tkm", projected, projected)
        return -0.5 * (d * LOG_2PI + cache.logdet[None, None, :] + quad)

    if x_bars is None:
        x_bars = x_posterior_means(cache, residuals)
    errors = residuals - np.einsum("mdp,tkmp->tkmd", cache.U, x_bars)
    quad = np.einsum("tkmd,tkmd,md->tkm", errors, errors, cache.inv_noise)
    return -0.5 * (d * LOG_2PI + cache.log_noise_sum[None, None, :] + quad)


def joint_log_terms(
    cache: ScoringCache,
    j: int,
    log_densities: np.ndarray,
    allowed: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Add ``log w_jkm`` and mask disallowed components with ``-inf``.

    Args:
        allowed: boolean (T, M) mask of components selected for each frame
    """
    terms = log_densities + cache.model.log_weight_matrix(j)[None]
    if allowed is not None:
        terms = np.where(allowed[:, None, :], terms, -np.inf)
    return terms


def state_frame_terms(
    cache: ScoringCache,
    j: int,
    Y: np.ndarray,
    mode: LikelihoodMode = LikelihoodMode.UNCERTAINTY,
    allowed: Optional[np.ndarray] = None,
    z: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Log joint terms ``log w_jkm + log N(y_t; ...)`` for many frames of one state.

    Args:
        cache: output of :func:`prepare_scoring`
        j: state index
        Y: frames, shape (T, d)
        mode: point or uncertainty estimate
        allowed: optional boolean (T, M) component mask
        z: sub-state vectors to use instead of the stored ones, shape (K, q)

    Returns:
        array of shape (T, K, M)
    """
    if z is None:
        z = cache.model.states[j].z
    residuals = frame_residuals(cache, Y, z)
    return joint_log_terms(cache, j, component_log_densities(cache, residuals, mode), allowed)


def _check_frame(model: TiedPldaModel, y: np.ndarray) -> np.ndarray:
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (model.hyper.d,):
        raise DimensionMismatchError("feature dimension", model.hyper.d, y.shape[-1] if y.ndim else 0)
    return y


def loglik_point(
    model: TiedPldaModel,
    j: int,
    y: np.ndarray,
    x_bars: Optional[np.ndarray] = None,
    z_bars: Optional[np.ndarray] = None,
    cache: Optional[ScoringCache] = None,
) -> FrameScore:
    """Point-estimate state likelihood of one frame.

    Args:
        x_bars: frame-variable estimates per (k, m), shape (K, M, p); the
            posterior means when omitted
        z_bars: sub-state vectors, shape (K, q); the stored ones when omitted
    """
    y = _check_frame(model, y)
    cache = cache or prepare_scoring(model)
    z = model.states[j].z if z_bars is None else np.asarray(z_bars, dtype=np.float64)
    residuals = frame_residuals(cache, y[None], z)
    if x_bars is not None:
        x_bars = np.asarray(x_bars, dtype=np.float64).reshape(1, z.shape[0], model.hyper.M, model.hyper.p)
    densities = component_log_densities(cache, residuals, LikelihoodMode.POINT, x_bars)
    return FrameScore.from_terms(joint_log_terms(cache, j, densities)[0])


def loglik_uncertainty(
    model: TiedPldaModel,
    j: int,
    y: np.ndarray,
    z_bars: Optional[np.ndarray] = None,
    cache: Optional[ScoringCache] = None,
    selected_components: Optional[Sequence[int]] = None,
) -> FrameScore:
    """Uncertainty-estimate state likelihood of one frame, x marginalised."""
    y = _check_frame(model, y)
    cache = cache or prepare_scoring(model)
    z = model.states[j].z if z_bars is None else np.asarray(z_bars, dtype=np.float64)
    allowed = None
    if selected_components is not None:
        allowed = selection_mask(np.asarray([selected_components]), model.hyper.M)
    residuals = frame_residuals(cache, y[None], z)
    densities = component_log_densities(cache, residuals, LikelihoodMode.UNCERTAINTY)
    return FrameScore.from_terms(joint_log_terms(cache, j, densities, allowed)[0])


def selection_mask(selection: np.ndarray, num_components: int) -> np.ndarray:
    """Boolean (T, M) mask from per-frame component index lists (T, N)."""
    selection = np.asarray(selection, dtype=np.int64)
    if selection.ndim != 2 or selection.shape[1] == 0:
        raise UsageError("component selection must list at least one component per frame")
    if selection.min() < 0 or selection.max() >= num_components:
        raise UsageError(f"component selection refers to components outside [0, {num_components})")
    mask = np.zeros((selection.shape[0], num_components), dtype=bool)
    np.put_along_axis(mask, selection, True, axis=1)
    return mask


def state_logliks(
    cache: ScoringCache,
    Y: np.ndarray,
    states: Sequence[int],
    mode: LikelihoodMode = LikelihoodMode.UNCERTAINTY,
    allowed: Optional[np.ndarray] = None,
) -> np.ndarray:
    """``log p(y_t | j)`` for every frame and each listed state, shape (T, len(states))."""
    out = np.empty((Y.shape[0], len(states)))
    for col, j in enumerate(states):
        terms = state_frame_terms(cache, j, Y, mode, allowed)
        out[:, col] = logsumexp(terms.reshape(Y.shape[0], -1), axis=1)
    return out


def classify_frames(
    model: TiedPldaModel,
    Y: np.ndarray,
    selection: Optional[np.ndarray] = None,
    candidate_states: Optional[Sequence[int]] = None,
    mode: LikelihoodMode = LikelihoodMode.UNCERTAINTY,
    cache: Optional[ScoringCache] = None,
    threads: int = 1,
    deterministic: bool = True,
) -> Tuple[np.ndarray, np.ndarray]:
    """Most likely state of every frame.

    Args:
        selection: optional (T, N) component indices per frame
        candidate_states: states to consider (all when omitted)
        threads: workers scoring blocks of ``SCORING_BLOCK`` frames
        deterministic: collect blocks in order rather than as they finish

    Returns:
        ``(best, logliks)``: best state per frame (ties go to the lowest index)
        and a (T, J) matrix of state log-likelihoods, ``-inf`` for states
        outside the candidate set
    """
    Y = np.asarray(Y, dtype=np.float64)
    if Y.ndim != 2 or Y.shape[1] != model.hyper.d:
        raise DimensionMismatchError("feature dimension", model.hyper.d, Y.shape[-1] if Y.ndim else 0)
    states = sorted(set(range(model.hyper.J) if candidate_states is None else candidate_states))
    if not states:
        raise UsageError("empty candidate state set")
    if states[0] < 0 or states[-1] >= model.hyper.J:
        raise UsageError(f"candidate states outside [0, {model.hyper.J})")
    cache = cache or prepare_scoring(model)
    mask = None if selection is None else selection_mask(selection, model.hyper.M)

    T = Y.shape[0]
    logliks = np.full((T, model.hyper.J), -np.inf)

    def score_block(start: int, stop: int) -> None:
        block_mask = None if mask is None else mask[start:stop]
        logliks[start:stop, states] = state_logliks(cache, Y[start:stop], states, mode, block_mask)

    map_blocks(score_block, T, threads, deterministic)

    dead = np.flatnonzero(np.all(np.isneginf(logliks), axis=1))
    if dead.size:
        raise NumericalError(f"frame {int(dead[0])} has no finite likelihood under any candidate state")
    return np.argmax(logliks, axis=1), logliks


def classify_frame(
    model: TiedPldaModel,
    y: np.ndarray,
    candidate_states: Optional[Sequence[int]] = None,
    selected_components: Optional[Sequence[int]] = None,
    mode: LikelihoodMode = LikelihoodMode.UNCERTAINTY,
    cache: Optional[ScoringCache] = None,
) -> Tuple[int, np.ndarray]:
    """Classify a single frame; see :func:`classify_frames`."""
    y = _check_frame(model, y)
    if selected_components is not None and len(selected_components) == 0:
        raise UsageError("selected component list is empty")
    selection = None if selected_components is None else np.asarray([selected_components])
    best, logliks = classify_frames(model, y[None], selection, candidate_states, mode, cache)
    return int(best[0]), logliks[0]


def map_blocks(
    fn: Callable[[int, int], R], total: int, threads: int = 1, deterministic: bool = True, block: int = SCORING_BLOCK
) -> List[R]:
    """Apply ``fn(start, stop)`` to consecutive blocks of ``total`` rows.

    Block boundaries do not depend on ``threads``. Results come back in block
    order either way; deterministic mode also collects them in that order.
    """
    bounds = [(start, min(start + block, total)) for start in range(0, total, block)]
    if threads <= 1 or len(bounds) <= 1:
        return [fn(*b) for b in bounds]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        if deterministic:
            return list(pool.map(lambda b: fn(*b), bounds))
        futures = {pool.submit(fn, *b): i for i, b in enumerate(bounds)}
        results: List[Optional[R]] = [None] * len(bounds)
        for future in as_completed(futures):
            results[futures[future]] = future.result()
        return results
