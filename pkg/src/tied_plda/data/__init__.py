"""Labels, splicing and synthetic data."""

from .labels import LabelSequence, LabelsSummary
from .splice import splice, spliced_dim
from .synthetic import LatentRecord, make_random_model, sample_corpus

__all__ = [
    "LabelSequence",
    "LabelsSummary",
    "LatentRecord",
    "make_random_model",
    "sample_corpus",
    "splice",
    "spliced_dim",
]
