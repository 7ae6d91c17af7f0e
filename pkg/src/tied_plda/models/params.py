"""Parameter containers for tied PLDA and PLDA mixture acoustic models.

Index conventions used throughout the package:

* ``j`` - state, ``0 <= j < J``
* ``k`` - sub-state of a state, ``0 <= k < K_j``
* ``m`` - component, ``0 <= m < M``

A frame of state ``j`` is generated as ``y = U_m x + G_m z_jk + b_m + eps`` with
``x ~ N(0, I_p)`` and ``eps ~ N(0, diag(Lambda_m))``. The mixture weight of
``(k, m)`` inside state ``j`` is ``w_jkm = c_jk * pi_jm``.
"""

from dataclasses import dataclass, field, replace
from enum import IntEnum
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..errors import ModelInvariantError

# Weight sums are checked against this tolerance when a container is built;
# training code renormalises to machine precision.
WEIGHT_SUM_TOLERANCE = 1e-6

# Footnote threshold for counting a component weight as active.
ACTIVE_WEIGHT_THRESHOLD = 0.01


class ModelFamily(IntEnum):
    """Which member of the PLDA family a container holds."""

    TIED = 0
    MIXTURE = 1


class Hyperparams(BaseModel):
    """Dimensions of a model."""

    model_config = ConfigDict(frozen=True)

    d: int = Field(..., gt=0, description="Feature dimension")
    p: int = Field(..., gt=0, description="Frame-variable dimension")
    q: int = Field(..., gt=0, description="State-variable dimension")
    M: int = Field(..., gt=0, description="Number of components")
    J: int = Field(..., gt=0, description="Number of states")

    @model_validator(mode="after")
    def _latent_not_wider_than_features(self) -> "Hyperparams":
        if self.p > self.d:
            raise ValueError(f"frame-variable dimension p={self.p} exceeds feature dimension d={self.d}")
        if self.q > self.d:
            raise ValueError(f"state-variable dimension q={self.q} exceeds feature dimension d={self.d}")
        return self


def _frozen(values, shape: Tuple[int, ...], name: str) -> np.ndarray:
    array = np.array(values, dtype=np.float64, copy=True)
    if array.shape != shape:
        raise ModelInvariantError(f"{name} has shape {array.shape}, expected {shape}")
    if not np.all(np.isfinite(array)):
        raise ModelInvariantError(f"{name} contains non-finite entries")
    array.setflags(write=False)
    return array


def _check_simplex(weights: np.ndarray, name: str, tolerance: float) -> None:
    if np.any(weights < 0.0) or np.any(weights > 1.0):
        raise ModelInvariantError(f"{name} weights outside [0, 1]")
    total = float(weights.sum())
    if abs(total - 1.0) > tolerance:
        raise ModelInvariantError(f"{name} weights not normalized (sum={total!r})")


@dataclass(frozen=True, eq=False)
class ComponentParams:
    """Globally shared parameters of one component.

    Attributes:
        U: frame-variable loading, shape (d, p)
        G: state-variable loading, shape (d, q)
        b: bias, shape (d,)
        Lambda: diagonal of the residual covariance, shape (d,), strictly positive
    """

    U: np.ndarray
    G: np.ndarray
    b: np.ndarray
    Lambda: np.ndarray

    def __post_init__(self):
        U = np.asarray(self.U, dtype=np.float64)
        G = np.asarray(self.G, dtype=np.float64)
        if U.ndim != 2 or G.ndim != 2:
            raise ModelInvariantError("U and G must be matrices")
        d = U.shape[0]
        object.__setattr__(self, "U", _frozen(U, (d, U.shape[1]), "U"))
        object.__setattr__(self, "G", _frozen(G, (d, G.shape[1]), "G"))
        object.__setattr__(self, "b", _frozen(self.b, (d,), "b"))
        lam = _frozen(self.Lambda, (d,), "Lambda")
        if np.any(lam <= 0.0):
            raise ModelInvariantError("Lambda entries must be strictly positive")
        object.__setattr__(self, "Lambda", lam)

    @property
    def d(self) -> int:
        return self.U.shape[0]

    @property
    def p(self) -> int:
        return self.U.shape[1]

    @property
    def q(self) -> int:
        return self.G.shape[1]

    def replace(self, **changes) -> "ComponentParams":
        return replace(self, **changes)

    def equals(self, other: "ComponentParams") -> bool:
        return all(
            np.array_equal(getattr(self, name), getattr(other, name))
            for name in ("U", "G", "b", "Lambda")
        )


@dataclass(frozen=True, eq=False)
class StateModel:
    """Per-state parameters: sub-state vectors and the two weight sets.

    Attributes:
        z: sub-state vectors, shape (K, q)
        c: sub-state weights, shape (K,)
        pi: component weights, shape (M,)
    """

    z: np.ndarray
    c: np.ndarray
    pi: np.ndarray
    tolerance: float = field(default=WEIGHT_SUM_TOLERANCE, repr=False)

    def __post_init__(self):
        z = np.asarray(self.z, dtype=np.float64)
        if z.ndim != 2 or z.shape[0] < 1:
            raise ModelInvariantError("a state needs at least one sub-state vector")
        object.__setattr__(self, "z", _frozen(z, z.shape, "z"))
        c = _frozen(self.c, (z.shape[0],), "c")
        pi = np.asarray(self.pi, dtype=np.float64)
        if pi.ndim != 1 or pi.shape[0] < 1:
            raise ModelInvariantError("pi must be a non-empty vector")
        pi = _frozen(pi, pi.shape, "pi")
        _check_simplex(c, "sub-state", self.tolerance)
        _check_simplex(pi, "component", self.tolerance)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "pi", pi)

    @property
    def num_substates(self) -> int:
        return self.z.shape[0]

    def replace(self, **changes) -> "StateModel":
        return replace(self, **changes)

    def equals(self, other: "StateModel") -> bool:
        return all(
            np.array_equal(getattr(self, name), getattr(other, name))
            for name in ("z", "c", "pi")
        )


@dataclass(frozen=True, eq=False)
class TiedPldaModel:
    """A complete model: hyperparameters, components and states.

    The PLDA mixture model is the degenerate case ``family == MIXTURE``:
    every state has exactly ``M`` sub-states and sub-state ``k`` is bound to
    component ``k``; ``pi`` is kept equal to ``c``.
    """

    hyper: Hyperparams
    components: Tuple[ComponentParams, ...]
    states: Tuple[StateModel, ...]
    family: ModelFamily = ModelFamily.TIED

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "family", ModelFamily(self.family))
        h = self.hyper
        if len(self.components) != h.M:
            raise ModelInvariantError(f"expected {h.M} components, got {len(self.components)}")
        if len(self.states) != h.J:
            raise ModelInvariantError(f"expected {h.J} states, got {len(self.states)}")
        for m, comp in enumerate(self.components):
            if (comp.d, comp.p, comp.q) != (h.d, h.p, h.q):
                raise ModelInvariantError(
                    f"component {m} has dimensions (d={comp.d}, p={comp.p}, q={comp.q}), "
                    f"expected (d={h.d}, p={h.p}, q={h.q})"
                )
        for j, state in enumerate(self.states):
            if state.z.shape[1] != h.q:
                raise ModelInvariantError(f"state {j} sub-state vectors have dimension {state.z.shape[1]}, expected {h.q}")
            if state.pi.shape[0] != h.M:
                raise ModelInvariantError(f"state {j} has {state.pi.shape[0]} component weights, expected {h.M}")
            if self.family == ModelFamily.MIXTURE and state.num_substates != h.M:
                raise ModelInvariantError(
                    f"mixture state {j} has {state.num_substates} sub-states, expected one per component ({h.M})"
                )

    @property
    def is_mixture(self) -> bool:
        return self.family == ModelFamily.MIXTURE

    @property
    def substate_counts(self) -> List[int]:
        return [state.num_substates for state in self.states]

    @property
    def total_substates(self) -> int:
        return sum(self.substate_counts)

    def substate_offsets(self) -> np.ndarray:
        """Start offset of each state's sub-states in a flat (j, k) indexing."""
        counts = np.asarray(self.substate_counts, dtype=np.int64)
        return np.concatenate(([0], np.cumsum(counts)))

    def weight_matrix(self, j: int) -> np.ndarray:
        """The (K_j, M) matrix of joint weights ``w_jkm``."""
        state = self.states[j]
        if self.is_mixture:
            return np.diag(state.c)
        return np.outer(state.c, state.pi)

    def log_weight_matrix(self, j: int) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(self.weight_matrix(j))

    def with_components(self, components: Sequence[ComponentParams]) -> "TiedPldaModel":
        return replace(self, components=tuple(components))

    def with_states(self, states: Sequence[StateModel]) -> "TiedPldaModel":
        return replace(self, states=tuple(states))

    def equals(self, other: "TiedPldaModel") -> bool:
        """Bit-exact equality of every stored value."""
        return (
            self.hyper == other.hyper
            and self.family == other.family
            and len(self.states) == len(other.states)
            and all(a.equals(b) for a, b in zip(self.components, other.components))
            and all(a.equals(b) for a, b in zip(self.states, other.states))
        )


def new_model(
    hyper: Hyperparams,
    substates_per_state: Optional[int] = 1,
    family: ModelFamily = ModelFamily.TIED,
    lambda_scale: float = 1.0,
) -> TiedPldaModel:
    """Create a model with neutral parameters.

    Sub-state vectors and U, G, b are zero, weights uniform and Lambda is
    ``lambda_scale`` times the identity. Callers overwrite the parameters
    (see :func:`tied_plda.training.init.init_model`).

    Args:
        hyper: model dimensions
        substates_per_state: K for every state; for the mixture family it must
            be ``None`` or equal to ``M``
        family: tied PLDA or PLDA mixture
        lambda_scale: initial residual variance
    """
    family = ModelFamily(family)
    if family == ModelFamily.MIXTURE:
        if substates_per_state not in (None, hyper.M):
            raise ValueError(
                f"a PLDA mixture model has one sub-state per component (M={hyper.M}), got {substates_per_state}"
            )
        substates_per_state = hyper.M
    if substates_per_state is None or substates_per_state < 1:
        raise ValueError(f"substates_per_state must be a positive integer, got {substates_per_state}")
    if lambda_scale <= 0:
        raise ValueError("lambda_scale must be positive")

    d, p, q, M = hyper.d, hyper.p, hyper.q, hyper.M
    component = ComponentParams(
        U=np.zeros((d, p)), G=np.zeros((d, q)), b=np.zeros(d), Lambda=np.full(d, float(lambda_scale))
    )
    K = substates_per_state
    c = np.full(K, 1.0 / K)
    pi = c.copy() if family == ModelFamily.MIXTURE else np.full(M, 1.0 / M)
    state = StateModel(z=np.zeros((K, q)), c=c, pi=pi)
    return TiedPldaModel(
        hyper=hyper,
        components=(component,) * M,
        states=(state,) * hyper.J,
        family=family,
    )


def count_params(
    model: TiedPldaModel,
    active_components_per_state: Optional[Sequence[int]] = None,
    threshold: float = ACTIVE_WEIGHT_THRESHOLD,
) -> Tuple[int, int]:
    """Count state-dependent and state-independent parameters.

    State-independent parameters are U, G, b and Lambda of every component:
    ``M * (d*p + d*q + 2*d)``.

    State-dependent parameters, with ``A_j`` the number of active component
    weights of state ``j`` (``pi_jm >= threshold`` unless given explicitly):

    * tied family: ``sum_j K_j * (q + 1) + A_j`` (sub-state vectors and
      weights, plus the shared component weights)
    * mixture family: ``sum_j A_j * (q + 1)`` (one state vector and one
      weight per active component)

    Returns:
        (state_dependent, state_independent)
    """
    h = model.hyper
    state_independent = h.M * (h.d * h.p + h.d * h.q + 2 * h.d)

    if active_components_per_state is not None:
        if len(active_components_per_state) != h.J:
            raise ValueError(
                f"active component counts given for {len(active_components_per_state)} states, model has {h.J}"
            )
        active = [int(a) for a in active_components_per_state]
    else:
        active = [int(np.count_nonzero(state.pi >= threshold)) for state in model.states]

    if model.is_mixture:
        state_dependent = sum(a * (h.q + 1) for a in active)
    else:
        state_dependent = sum(
            state.num_substates * (h.q + 1) + a for state, a in zip(model.states, active)
        )
    return state_dependent, state_independent
