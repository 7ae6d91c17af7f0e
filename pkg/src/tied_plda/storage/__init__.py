"""Binary file formats: models, background models, features and labels."""

from .background_file import read_background, write_background
from .feature_file import read_features, write_features
from .label_file import read_labels, write_labels
from .model_file import read_model, write_model

__all__ = [
    "read_background",
    "read_features",
    "read_labels",
    "read_model",
    "write_background",
    "write_features",
    "write_labels",
    "write_model",
]
