"""Frame classification accuracy, average log-likelihood and the baseline."""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..data.labels import LabelSequence
from ..errors import DimensionMismatchError, UsageError
from ..inference.cache import ScoringCache, prepare_scoring
from ..inference.likelihood import LikelihoodMode, classify_frames, selection_mask, state_logliks
from ..models.params import TiedPldaModel
from ..models.reports import EvalReport
from ..utils.logging import get_logger

logger = get_logger(__name__)


def _check_inputs(model: TiedPldaModel, features: np.ndarray, labels: LabelSequence) -> np.ndarray:
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2 or features.shape[1] != model.hyper.d:
        raise DimensionMismatchError(
            "feature dimension", model.hyper.d, features.shape[-1] if features.ndim else 0, "features"
        )
    labels.validate(model.hyper.J, features.shape[0])
    return features


def labelled_loglik(
    cache: ScoringCache,
    features: np.ndarray,
    labels: LabelSequence,
    mode: LikelihoodMode = LikelihoodMode.UNCERTAINTY,
    mask: Optional[np.ndarray] = None,
) -> Tuple[float, float]:
    """``sum P(j|y_t) log p(y_t | j)`` over all label entries, and the total mass."""
    total, mass = 0.0, 0.0
    for j in np.unique(labels.states):
        pick = labels.states == j
        frames, weight = labels.frames[pick], labels.masses[pick]
        allowed = None if mask is None else mask[frames]
        values = state_logliks(cache, features[frames], [int(j)], mode, allowed)[:, 0]
        total += float(weight @ values)
        mass += float(weight.sum())
    return total, mass


def confusion_matrix(reference: np.ndarray, hypothesis: np.ndarray, num_states: int) -> np.ndarray:
    """Counts with reference states as rows; frames with reference -1 are skipped."""
    keep = reference >= 0
    flat = reference[keep] * num_states + hypothesis[keep]
    return np.bincount(flat, minlength=num_states * num_states).reshape(num_states, num_states)


def evaluate(
    model: TiedPldaModel,
    features: np.ndarray,
    labels: LabelSequence,
    selection: Optional[np.ndarray] = None,
    mode: LikelihoodMode = LikelihoodMode.UNCERTAINTY,
    cache: Optional[ScoringCache] = None,
    threads: int = 1,
    deterministic: bool = True,
    hypothesis: Optional[np.ndarray] = None,
    baseline: Optional["DiagonalGaussianBaseline"] = None,
) -> EvalReport:
    """Classify every frame and summarise against ``labels``.

    Accuracy counts frames whose most probable label state (the hard label, or
    the largest posterior mass for soft labels) matches the classifier. The
    average log-likelihood weights ``log p(y_t | j)`` by the label masses,
    the same quantity the E-step reports.

    ``hypothesis`` supplies decisions already made for ``features``; the
    frames are classified here otherwise. With a ``baseline`` the report also
    carries its accuracy on the same frames.

    Raises:
        DimensionMismatchError: features disagree with the model or labels.
    """
    features = _check_inputs(model, features, labels)
    cache = cache or prepare_scoring(model)
    T, J = features.shape[0], model.hyper.J
    if selection is not None:
        selection = np.asarray(selection, dtype=np.int64)
        if selection.shape[0] != T:
            raise DimensionMismatchError("frame count", T, selection.shape[0], "selection")

    if hypothesis is None:
        hypothesis, _ = classify_frames(
            model, features, selection, mode=mode, cache=cache, threads=threads, deterministic=deterministic
        )
    elif np.shape(hypothesis) != (T,):
        raise DimensionMismatchError("frame count", T, len(hypothesis), "decisions")
    hypothesis = np.asarray(hypothesis, dtype=np.int64)

    confusion = confusion_matrix(labels.hard_states(), hypothesis, J)
    frames = int(confusion.sum())
    accuracy = float(np.trace(confusion)) / frames if frames else 0.0

    mask = None if selection is None else selection_mask(selection, model.hyper.M)
    total, mass = labelled_loglik(cache, features, labels, mode, mask)
    avg = total / mass if mass > 0.0 else float("nan")
    logger.info(
        f"Evaluated {frames} frames: accuracy {accuracy:.4f}, avg loglik {avg:.6f}",
        extra={"metrics": {"frames": frames, "accuracy": accuracy, "avg_loglik": avg}},
    )
    baseline_accuracy = None if baseline is None else baseline.accuracy(features, labels)
    return EvalReport(
        frames=frames, accuracy=accuracy, avg_loglik=avg, confusion=confusion.tolist(),
        baseline_accuracy=baseline_accuracy,
    )


@dataclass(frozen=True)
class DiagonalGaussianBaseline:
    """One diagonal Gaussian per state, scored with equal state priors.

    Attributes:
        means: shape (J, d)
        variances: shape (J, d)
        trained: states that had labelled frames
    """

    means: np.ndarray
    variances: np.ndarray
    trained: np.ndarray

    def log_likelihoods(self, features: np.ndarray) -> np.ndarray:
        """Per-state log densities, shape (T, J); ``-inf`` for untrained states."""
        Y = np.asarray(features, dtype=np.float64)
        diff = Y[:, None, :] - self.means[None]
        out = -0.5 * (
            np.sum(np.log(2.0 * np.pi * self.variances), axis=1)[None]
            + np.sum(diff * diff / self.variances[None], axis=2)
        )
        out[:, ~self.trained] = -np.inf
        return out

    def classify(self, features: np.ndarray) -> np.ndarray:
        return np.argmax(self.log_likelihoods(features), axis=1)

    def accuracy(self, features: np.ndarray, labels: LabelSequence) -> float:
        confusion = confusion_matrix(labels.hard_states(), self.classify(features), self.means.shape[0])
        total = int(confusion.sum())
        return float(np.trace(confusion)) / total if total else 0.0


def fit_diagonal_baseline(
    features: np.ndarray, labels: LabelSequence, num_states: int, variance_floor_scale: float = 1e-6
) -> DiagonalGaussianBaseline:
    """Maximum-likelihood diagonal Gaussian per state, weighted by the label masses."""
    features = np.asarray(features, dtype=np.float64)
    labels.validate(num_states, features.shape[0])
    if not labels.num_entries:
        raise UsageError("baseline needs at least one labelled frame")
    d = features.shape[1]
    floor = variance_floor_scale * np.maximum(features.var(axis=0), np.finfo(np.float64).tiny)

    mass = np.bincount(labels.states, weights=labels.masses, minlength=num_states)
    sums = np.zeros((num_states, d))
    squares = np.zeros((num_states, d))
    Y = features[labels.frames] * labels.masses[:, None]
    np.add.at(sums, labels.states, Y)
    np.add.at(squares, labels.states, Y * features[labels.frames])

    trained = mass > 0.0
    means = np.zeros((num_states, d))
    variances = np.ones((num_states, d))
    means[trained] = sums[trained] / mass[trained, None]
    variances[trained] = squares[trained] / mass[trained, None] - means[trained] ** 2
    variances = np.maximum(variances, floor)
    return DiagonalGaussianBaseline(means=means, variances=variances, trained=trained)


def held_out_loglik(
    model: TiedPldaModel,
    features: np.ndarray,
    labels: LabelSequence,
    mode: LikelihoodMode = LikelihoodMode.UNCERTAINTY,
    selection: Optional[np.ndarray] = None,
) -> float:
    """Average per-frame log-likelihood of labelled data; see :func:`labelled_loglik`."""
    features = _check_inputs(model, features, labels)
    mask = None if selection is None else selection_mask(selection, model.hyper.M)
    total, mass = labelled_loglik(prepare_scoring(model), features, labels, mode, mask)
    return total / mass

