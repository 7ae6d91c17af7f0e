"""Scoring service: frame log-likelihoods, classification and model summaries."""

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence

import numpy as np

from ..eval.metrics import evaluate, fit_diagonal_baseline
from ..eval.tables import param_table
from ..inference.cache import prepare_scoring
from ..inference.likelihood import LikelihoodMode, classify_frames, map_blocks, selection_mask, state_logliks
from ..models.params import count_params
from ..errors import UsageError
from ..models.reports import EvalReport, ParamRow
from ..storage import read_features, read_labels, read_model
from ..training.em import active_histogram
from ..utils.logging import get_logger
from .training_service import check_feature_dim, load_labelled_features, selection_for


@dataclass
class ClassificationResult:
    """Best state per frame with its log-likelihood, and the optional report."""

    best: np.ndarray
    best_loglik: np.ndarray
    report: Optional[EvalReport] = None

    def lines(self) -> Iterator[str]:
        for t, (state, value) in enumerate(zip(self.best, self.best_loglik)):
            yield f"{t}\t{int(state)}\t{value:.10g}"


class ScoringService:
    """Scores and classifies frames with a trained model.

    Frames are scored in fixed blocks spread over ``threads`` workers; with
    ``deterministic`` the blocks are also collected in order.
    """

    def __init__(
        self, mode: LikelihoodMode = LikelihoodMode.UNCERTAINTY, threads: int = 1, deterministic: bool = False
    ):
        self.mode = LikelihoodMode(mode)
        self.threads = max(1, threads)
        self.deterministic = deterministic
        self.logger = get_logger("tied_plda.services.scoring")

    def _load(self, model_path: Path, features_path: Path):
        model = read_model(model_path)
        features = read_features(features_path)
        check_feature_dim(model.hyper.d, features, features_path, model_path)
        return model, features

    def score(
        self,
        model_path: Path,
        features_path: Path,
        labels_path: Path,
        bg_path: Optional[Path] = None,
        select_n: Optional[int] = None,
    ) -> Iterator[str]:
        """Lines ``frame<TAB>state<TAB>log p(y|state)``, one per label entry."""
        model = read_model(model_path)
        features, labels = load_labelled_features(features_path, labels_path)
        check_feature_dim(model.hyper.d, features, features_path, model_path)
        labels.validate(model.hyper.J, source=str(labels_path))
        selection = selection_for(bg_path, features, select_n, model)
        mask = None if selection is None else selection_mask(selection, model.hyper.M)
        cache = prepare_scoring(model)

        values = np.empty(labels.num_entries)

        def score_block(start: int, stop: int) -> None:
            states, frames = labels.states[start:stop], labels.frames[start:stop]
            for j in np.unique(states):
                pick = np.flatnonzero(states == j)
                rows = frames[pick]
                allowed = None if mask is None else mask[rows]
                values[start + pick] = state_logliks(cache, features[rows], [int(j)], self.mode, allowed)[:, 0]

        map_blocks(score_block, labels.num_entries, self.threads, self.deterministic)
        self.logger.info(f"Scored {labels.num_entries} labelled frames from {features_path}")
        for f, s, v in zip(labels.frames, labels.states, values):
            yield f"{int(f)}\t{int(s)}\t{v:.10g}"

    def classify(
        self,
        model_path: Path,
        features_path: Path,
        bg_path: Optional[Path] = None,
        select_n: Optional[int] = None,
        candidate_states: Optional[Sequence[int]] = None,
        labels_path: Optional[Path] = None,
        baseline_features_path: Optional[Path] = None,
        baseline_labels_path: Optional[Path] = None,
    ) -> ClassificationResult:
        """Best state per frame; with ``labels_path`` also the evaluation report.

        The baseline paths name labelled training data for the per-state
        diagonal-Gaussian baseline whose accuracy the report then includes.
        """
        if (baseline_features_path is None) != (baseline_labels_path is None):
            raise UsageError("--baseline-features and --baseline-labels must be given together")
        if baseline_features_path is not None and labels_path is None:
            raise UsageError("the baseline needs --labels to be scored against")
        model, features = self._load(model_path, features_path)
        selection = selection_for(bg_path, features, select_n, model)
        cache = prepare_scoring(model)
        best, logliks = classify_frames(
            model, features, selection, candidate_states, self.mode, cache, self.threads, self.deterministic
        )
        result = ClassificationResult(best=best, best_loglik=logliks[np.arange(best.shape[0]), best])
        if labels_path is not None:
            labels = read_labels(labels_path)
            labels.validate(model.hyper.J, features.shape[0], source=str(labels_path))
            baseline = None
            if baseline_features_path is not None:
                train_features, train_labels = load_labelled_features(baseline_features_path, baseline_labels_path)
                check_feature_dim(model.hyper.d, train_features, baseline_features_path, model_path)
                baseline = fit_diagonal_baseline(train_features, train_labels, model.hyper.J)
            report = evaluate(
                model, features, labels, selection, self.mode, cache, hypothesis=best, baseline=baseline
            )
            result.report = report.model_copy(update={"param_rows": param_table([(model_path.name, model)])})
        self.logger.info(f"Classified {best.shape[0]} frames from {features_path}")
        return result

    def count_params(self, model_paths: Sequence[Path]) -> List[ParamRow]:
        return param_table([(path.name, read_model(path)) for path in model_paths])

    def inspect(self, model_path: Path) -> Dict[str, object]:
        """Dimensions, sub-state counts and weight summaries of a model file."""
        model = read_model(model_path)
        h = model.hyper
        dependent, independent = count_params(model)
        pi = np.stack([state.pi for state in model.states])
        lam = np.stack([comp.Lambda for comp in model.components])
        return {
            "family": model.family.name.lower(),
            "d": h.d,
            "p": h.p,
            "q": h.q,
            "M": h.M,
            "J": h.J,
            "substates": model.total_substates,
            "substates_per_state_max": max(model.substate_counts),
            "state_dependent_params": dependent,
            "state_independent_params": independent,
            "pi_min": float(pi.min()),
            "pi_max": float(pi.max()),
            "lambda_min": float(lam.min()),
            "lambda_max": float(lam.max()),
            "active_histogram": active_histogram(model),
        }


def model_summary_rows(summary: Dict[str, object]) -> List[List[str]]:
    rows = []
    for key, value in summary.items():
        if isinstance(value, float):
            rows.append([key, f"{value:.6g}"])
        elif isinstance(value, dict):
            rows.append([key, ", ".join(f"{k}:{v}" for k, v in value.items())])
        else:
            rows.append([key, str(value)])
    return rows
