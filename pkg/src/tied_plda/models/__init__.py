"""Model containers and report types."""

from .params import (
    ACTIVE_WEIGHT_THRESHOLD,
    ComponentParams,
    Hyperparams,
    ModelFamily,
    StateModel,
    TiedPldaModel,
    count_params,
    new_model,
)
from .background import BackgroundModel
from .reports import EmReport, EvalReport, ParamRow

__all__ = [
    "ACTIVE_WEIGHT_THRESHOLD",
    "BackgroundModel",
    "ComponentParams",
    "EmReport",
    "EvalReport",
    "Hyperparams",
    "ModelFamily",
    "ParamRow",
    "StateModel",
    "TiedPldaModel",
    "count_params",
    "new_model",
]
