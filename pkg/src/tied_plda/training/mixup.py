"""Growing the number of sub-states by splitting."""

import heapq
from typing import List, Optional, Sequence

import numpy as np

from ..errors import UsageError
from ..models.params import StateModel, TiedPldaModel
from ..utils.logging import get_logger

logger = get_logger(__name__)

SPLIT_PERTURBATION = 0.1


def mixup(
    model: TiedPldaModel,
    target_substates: int,
    seed: int = 0,
    occupancy: Optional[Sequence[Sequence[float]]] = None,
) -> TiedPldaModel:
    """Split sub-states until the model has ``target_substates`` in total.

    The sub-state with the largest occupancy is split first (ties go to the
    lowest state, then sub-state index). Its children sit at
    ``z +/- 0.1 r`` for a seeded random unit vector ``r`` and each takes half
    of the parent's weight ``c``; ``pi`` is shared by all sub-states of a
    state and stays untouched. Each child inherits half of the parent's
    occupancy for later splitting decisions.

    Args:
        model: tied-family model
        target_substates: total number of sub-states over all states
        seed: seed for the perturbation directions
        occupancy: per-state, per-sub-state occupancy (e.g.
            ``EmReport.substate_occupancy``); the sub-state weights are used
            when omitted or when the shapes no longer match the model

    Raises:
        UsageError: the model is a PLDA mixture, or the target is below the
            current number of sub-states.
    """
    if model.is_mixture:
        raise UsageError("mixing-up applies to tied PLDA models only; a PLDA mixture has fixed sub-states")
    current = model.total_substates
    if target_substates < current:
        raise UsageError(f"mixup target {target_substates} is below the current {current} sub-states")
    if target_substates == current:
        return model

    counts = model.substate_counts
    if occupancy is None or [len(o) for o in occupancy] != counts:
        if occupancy is not None:
            logger.warning("Occupancy does not match the model's sub-states; splitting by sub-state weight")
        occupancy = [state.c for state in model.states]

    rng = np.random.default_rng(seed)
    z: List[List[np.ndarray]] = [list(state.z) for state in model.states]
    c: List[List[float]] = [list(state.c) for state in model.states]
    heap = [(-float(occ), j, k) for j, row in enumerate(occupancy) for k, occ in enumerate(row)]
    heapq.heapify(heap)

    for _ in range(target_substates - current):
        neg_occ, j, k = heapq.heappop(heap)
        direction = rng.standard_normal(model.hyper.q)
        direction /= np.linalg.norm(direction)
        parent = z[j][k]
        z[j][k] = parent + SPLIT_PERTURBATION * direction
        z[j].append(parent - SPLIT_PERTURBATION * direction)
        half = c[j][k] / 2.0
        c[j][k] = half
        c[j].append(half)
        heapq.heappush(heap, (neg_occ / 2.0, j, k))
        heapq.heappush(heap, (neg_occ / 2.0, j, len(z[j]) - 1))

    states = [
        StateModel(z=np.array(z[j]), c=np.array(c[j]), pi=state.pi)
        for j, state in enumerate(model.states)
    ]
    logger.info(f"Mixed up from {current} to {target_substates} sub-states")
    return model.with_states(states)
