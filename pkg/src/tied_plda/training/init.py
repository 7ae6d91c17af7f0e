"""Model initialisation from a background model."""

from typing import Optional

import numpy as np

from ..data.labels import LabelsSummary
from ..errors import DimensionMismatchError
from ..models.background import BackgroundModel
from ..models.params import ComponentParams, Hyperparams, ModelFamily, StateModel, TiedPldaModel
from ..utils.logging import get_logger

logger = get_logger(__name__)

# Standard deviation of the random G entries and of extra U columns.
INIT_LOADING_SCALE = 0.1


def init_model(
    bg: BackgroundModel,
    hyper: Hyperparams,
    labels_summary: Optional[LabelsSummary] = None,
    seed: int = 0,
    family: ModelFamily = ModelFamily.TIED,
    variance_floor_scale: float = 1e-6,
) -> TiedPldaModel:
    """Initial tied PLDA (or PLDA mixture) model for ``hyper.J`` states.

    * ``b_m`` is the background mean
    * ``Lambda_m`` is the background total per-dimension variance
      ``psi_m + diag(W_m W_m^T)``, floored at ``variance_floor_scale`` times
      the data variance (ones without a labels summary)
    * ``U_m`` is the background loading truncated to ``p`` columns; missing
      columns are drawn from ``N(0, 0.1^2)`` scaled by the noise deviation
    * ``G_m`` entries are drawn from ``N(0, 0.1^2)``
    * one sub-state per state with ``z = 0`` (``M`` bound sub-states for the
      mixture family) and uniform weights

    Raises:
        DimensionMismatchError: the background model disagrees with ``hyper``.
    """
    if bg.num_components != hyper.M:
        raise DimensionMismatchError("component count", hyper.M, bg.num_components, "background model")
    if bg.dim != hyper.d:
        raise DimensionMismatchError("feature dimension", hyper.d, bg.dim, "background model")

    rng = np.random.default_rng(seed)
    d, p, q, M = hyper.d, hyper.p, hyper.q, hyper.M
    reference = np.ones(d) if labels_summary is None else labels_summary.data_variance
    floor = variance_floor_scale * reference

    components = []
    for m in range(M):
        W = bg.loadings[m]
        Lambda = np.maximum(bg.noise[m] + np.einsum("dr,dr->d", W, W), floor)
        G = rng.normal(0.0, INIT_LOADING_SCALE, size=(d, q))
        if W.shape[1] >= p:
            U = W[:, :p]
        else:
            extra = rng.normal(0.0, INIT_LOADING_SCALE, size=(d, p - W.shape[1])) * np.sqrt(bg.noise[m])[:, None]
            U = np.hstack([W, extra])
        components.append(ComponentParams(U=U, G=G, b=bg.means[m], Lambda=Lambda))

    family = ModelFamily(family)
    K = M if family == ModelFamily.MIXTURE else 1
    c = np.full(K, 1.0 / K)
    pi = c.copy() if family == ModelFamily.MIXTURE else np.full(M, 1.0 / M)
    state = StateModel(z=np.zeros((K, q)), c=c, pi=pi)

    if labels_summary is not None and labels_summary.empty_states:
        logger.warning(f"{len(labels_summary.empty_states)} state(s) have no labelled frames")
    logger.info(f"Initialised {family.name.lower()} model: d={d}, p={p}, q={q}, M={M}, J={hyper.J}")
    return TiedPldaModel(hyper=hyper, components=components, states=(state,) * hyper.J, family=family)
