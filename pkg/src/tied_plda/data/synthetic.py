"""Synthetic corpora sampled from the generative model."""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..models.params import ComponentParams, Hyperparams, ModelFamily, StateModel, TiedPldaModel
from .labels import LabelSequence

# Scales of the random generating model.
FRAME_LOADING_SCALE = 0.5
STATE_LOADING_SCALE = 1.0
WEIGHT_CONCENTRATION = 5.0


@dataclass(frozen=True)
class LatentRecord:
    """The hidden draws behind every sampled frame.

    Attributes:
        states: state index per frame, shape (T,)
        substates: sub-state index per frame, shape (T,)
        components: component index per frame, shape (T,)
        x: frame variables, shape (T, p)
        noise: residuals ``eps``, shape (T, d)
    """

    states: np.ndarray
    substates: np.ndarray
    components: np.ndarray
    x: np.ndarray
    noise: np.ndarray


def _draw_index(cumulative: np.ndarray, uniforms: np.ndarray) -> np.ndarray:
    return np.minimum(np.searchsorted(cumulative, uniforms, side="right"), cumulative.shape[0] - 1)


def sample_corpus(
    model: TiedPldaModel, frames_per_state: int, seed: int = 0
) -> Tuple[np.ndarray, LabelSequence, LatentRecord]:
    """Sample ``frames_per_state * J`` frames.

    Frame ``t`` belongs to state ``t mod J``. For each frame the sub-state is
    drawn from ``c_j`` and the component from ``pi_j`` (the mixture family
    binds the component to the sub-state), then
    ``y = U_m x + G_m z_jk + b_m + eps`` with ``x ~ N(0, I)`` and
    ``eps ~ N(0, diag(Lambda_m))``.

    Returns:
        (features, hard labels, latent record)
    """
    if frames_per_state < 0:
        raise ValueError(f"frames_per_state must be non-negative, got {frames_per_state}")
    h = model.hyper
    T = frames_per_state * h.J
    rng = np.random.default_rng(seed)
    substate_draws = rng.random(T)
    component_draws = rng.random(T)
    x = rng.standard_normal((T, h.p))
    unit_noise = rng.standard_normal((T, h.d))

    states = np.arange(T) % h.J
    substates = np.empty(T, dtype=np.int64)
    components = np.empty(T, dtype=np.int64)
    for j, state in enumerate(model.states):
        rows = states == j
        substates[rows] = _draw_index(np.cumsum(state.c), substate_draws[rows])
        if model.is_mixture:
            components[rows] = substates[rows]
        else:
            components[rows] = _draw_index(np.cumsum(state.pi), component_draws[rows])

    U = np.stack([comp.U for comp in model.components])
    G = np.stack([comp.G for comp in model.components])
    b = np.stack([comp.b for comp in model.components])
    sd = np.sqrt(np.stack([comp.Lambda for comp in model.components]))
    offsets = model.substate_offsets()
    z = np.concatenate([state.z for state in model.states])[offsets[states] + substates]

    noise = unit_noise * sd[components]
    Y = (
        np.einsum("tdp,tp->td", U[components], x)
        + np.einsum("tdq,tq->td", G[components], z)
        + b[components]
        + noise
    )
    record = LatentRecord(states=states, substates=substates, components=components, x=x, noise=noise)
    return Y, LabelSequence.from_hard(states), record


def make_random_model(
    hyper: Hyperparams,
    substates_per_state: int = 1,
    seed: int = 0,
    family: ModelFamily = ModelFamily.TIED,
    separation: float = 5.0,
) -> TiedPldaModel:
    """A random generating model with well separated component biases.

    ``b_m ~ N(0, separation^2)``, U and G entries normal with standard
    deviations 0.5 and 1.0, Lambda uniform in [0.5, 1.5], sub-state vectors
    standard normal and weights from a symmetric Dirichlet(5).
    """
    rng = np.random.default_rng(seed)
    family = ModelFamily(family)
    d, p, q, M = hyper.d, hyper.p, hyper.q, hyper.M
    components = [
        ComponentParams(
            U=rng.normal(0.0, FRAME_LOADING_SCALE, size=(d, p)),
            G=rng.normal(0.0, STATE_LOADING_SCALE, size=(d, q)),
            b=rng.normal(0.0, separation, size=d),
            Lambda=rng.uniform(0.5, 1.5, size=d),
        )
        for _ in range(M)
    ]
    K = M if family == ModelFamily.MIXTURE else substates_per_state
    states = []
    for _ in range(hyper.J):
        c = rng.dirichlet(np.full(K, WEIGHT_CONCENTRATION))
        pi = c.copy() if family == ModelFamily.MIXTURE else rng.dirichlet(np.full(M, WEIGHT_CONCENTRATION))
        states.append(StateModel(z=rng.standard_normal((K, q)), c=c, pi=pi))
    return TiedPldaModel(hyper=hyper, components=components, states=states, family=family)
