"""EM iterations and the training loop."""

from collections import Counter
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config import STARVATION_OCCUPANCY, STARVATION_PATIENCE, TrainingConfig
from ..models.params import ACTIVE_WEIGHT_THRESHOLD, StateModel, TiedPldaModel
from ..models.reports import EmReport
from ..utils.logging import get_logger
from .estep import TrainingData, estep
from .mstep import auxiliary, update_b, update_G, update_Lambda, update_U, update_weights

logger = get_logger(__name__)


def active_histogram(model: TiedPldaModel, threshold: float = ACTIVE_WEIGHT_THRESHOLD) -> Dict[int, int]:
    """Number of states by count of component weights at or above ``threshold``."""
    counts = Counter(int(np.count_nonzero(state.pi >= threshold)) for state in model.states)
    return dict(sorted(counts.items()))


def em_iteration(
    model: TiedPldaModel,
    data: TrainingData,
    config: TrainingConfig,
    iteration: int = 0,
    threads: int = 1,
) -> Tuple[TiedPldaModel, EmReport]:
    """One EM iteration: two-sweep E-step, then U, G, b, Lambda and weights.

    Raises:
        NumericalError: no frames, or a frame without finite likelihood.
    """
    result = estep(model, data, config.likelihood_mode, threads, config.deterministic)
    acc, z = result.accumulators, result.z
    floor = config.variance_floor_scale * data.variance_reference()

    deltas = {"U": 0.0, "G": 0.0, "b": 0.0, "Lambda": 0.0}
    ridge_count = floored_variances = frozen = 0
    components = []
    for m, comp in enumerate(model.components):
        if acc.component_occupancy[m] <= 0.0:
            logger.warning(f"Component {m} has zero occupancy; keeping its parameters")
            frozen += 1
            components.append(comp)
            continue

        before = auxiliary(acc, z, m, comp)
        U, ridged = update_U(acc, z, m, comp)
        ridge_count += ridged
        comp = comp.replace(U=U)
        after = auxiliary(acc, z, m, comp)
        deltas["U"] += after - before

        before = auxiliary(acc, z, m, comp, z_uncertainty=True)
        G, ridged = update_G(acc, z, m, comp)
        ridge_count += ridged
        comp = comp.replace(G=G)
        deltas["G"] += auxiliary(acc, z, m, comp, z_uncertainty=True) - before

        before = auxiliary(acc, z, m, comp)
        comp = comp.replace(b=update_b(acc, z, m, comp))
        after = auxiliary(acc, z, m, comp)
        deltas["b"] += after - before

        Lambda, floored = update_Lambda(acc, z, m, comp, floor)
        floored_variances += floored
        comp = comp.replace(Lambda=Lambda)
        deltas["Lambda"] += auxiliary(acc, z, m, comp) - after
        components.append(comp)

    weights, floored_weights = update_weights(acc, model, config.weight_floor)
    offsets = model.substate_offsets()
    states = [
        StateModel(z=z.means[offsets[j]:offsets[j + 1]], c=c, pi=pi)
        for j, (c, pi) in enumerate(weights)
    ]
    new_model = model.with_components(components).with_states(states)

    occupancy = acc.substate_occupancy
    report = EmReport(
        iteration=iteration,
        avg_loglik=result.avg_loglik,
        frames=result.frames,
        aux_deltas=deltas,
        floored_weights=floored_weights,
        floored_variances=floored_variances,
        ridge_count=ridge_count,
        frozen_components=frozen,
        active_histogram=active_histogram(new_model),
        substate_occupancy=[occupancy[offsets[j]:offsets[j + 1]].tolist() for j in range(model.hyper.J)],
    )
    logger.info(
        f"Iteration {iteration}: avg loglik {report.avg_loglik:.6f} over {report.frames:.0f} frames",
        extra={"metrics": {"iteration": iteration, "avg_loglik": report.avg_loglik}},
    )
    logger.debug(
        "Auxiliary deltas " + ", ".join(f"{k}={v:.4g}" for k, v in deltas.items())
        + f"; floored weights={floored_weights}, floored variances={floored_variances}, ridge={ridge_count}"
    )
    return new_model, report


def merge_starved_substates(
    model: TiedPldaModel,
    starvation_counts: Sequence[np.ndarray],
    patience: int = STARVATION_PATIENCE,
) -> Tuple[TiedPldaModel, int, List[np.ndarray]]:
    """Merge sub-states starved for ``patience`` iterations into their nearest sibling.

    The nearest sibling is the closest sub-state vector in Euclidean distance
    (lowest index on ties); it absorbs the starved sub-state's weight. A state
    always keeps at least one sub-state. The mixture family is left unchanged.

    Returns:
        (model, number of merged sub-states, starvation counts of the result)
    """
    counts = [np.asarray(c, dtype=np.int64).copy() for c in starvation_counts]
    if model.is_mixture:
        return model, 0, counts

    merged = 0
    states = list(model.states)
    for j, state in enumerate(states):
        z, c, count = state.z.copy(), state.c.copy(), counts[j]
        while z.shape[0] > 1:
            starved = np.flatnonzero(count >= patience)
            if not starved.size:
                break
            k = int(starved[0])
            distances = np.linalg.norm(z - z[k], axis=1)
            distances[k] = np.inf
            nearest = int(np.argmin(distances))
            c[nearest] += c[k]
            z, c, count = np.delete(z, k, axis=0), np.delete(c, k), np.delete(count, k)
            merged += 1
            logger.warning(f"Merged starved sub-state {k} of state {j} into sibling {nearest}")
        if z.shape[0] != state.num_substates:
            states[j] = StateModel(z=z, c=c / c.sum(), pi=state.pi)
            counts[j] = count
    return model.with_states(states), merged, counts


def train(
    model: TiedPldaModel,
    data: TrainingData,
    config: TrainingConfig,
    threads: int = 1,
    callback: Optional[Callable[[EmReport], None]] = None,
    iterations: Optional[int] = None,
) -> Tuple[TiedPldaModel, List[EmReport]]:
    """Run ``config.iterations`` EM iterations (or ``iterations`` if given).

    Sub-states whose occupancy stays below one frame for
    ``STARVATION_PATIENCE`` consecutive iterations are merged after the
    iteration that reaches the limit; the merge count is reported with it.
    """
    iterations = config.iterations if iterations is None else iterations
    starvation = [np.zeros(state.num_substates, dtype=np.int64) for state in model.states]
    reports: List[EmReport] = []
    for iteration in range(iterations):
        model, report = em_iteration(model, data, config, iteration, threads)
        for j, occupancy in enumerate(report.substate_occupancy):
            starved = np.asarray(occupancy) < STARVATION_OCCUPANCY
            starvation[j] = np.where(starved, starvation[j] + 1, 0)
        model, merged, starvation = merge_starved_substates(model, starvation)
        if merged:
            report = report.model_copy(update={"merged_substates": merged})
        reports.append(report)
        if callback is not None:
            callback(report)
    return model, reports
