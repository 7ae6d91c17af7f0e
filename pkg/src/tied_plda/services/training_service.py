"""Training service: loads inputs, runs the library and saves outputs."""

from pathlib import Path
from typing import Callable, List, Optional, Tuple

import numpy as np
from pydantic import ValidationError

from ..background.mfa import BackgroundTrainer
from ..background.selection import build_selection
from ..config import TrainingConfig, load_training_config
from ..data.labels import LabelSequence
from ..data.synthetic import make_random_model, sample_corpus
from ..errors import DimensionMismatchError, UsageError
from ..models.background import BackgroundModel
from ..models.params import Hyperparams, ModelFamily, TiedPldaModel
from ..models.reports import EmReport
from ..storage import (
    read_background,
    read_features,
    read_labels,
    read_model,
    write_background,
    write_features,
    write_labels,
    write_model,
)
from ..training.em import train
from ..training.estep import TrainingData, estep
from ..training.init import init_model
from ..training.mixup import mixup
from ..utils.logging import get_logger


def hyperparams_from_flags(**values) -> Hyperparams:
    """Build hyperparameters from command-line values; invalid ones are usage errors."""
    try:
        return Hyperparams(**values)
    except ValidationError as e:
        problems = "; ".join(f"{'.'.join(str(p) for p in err['loc']) or 'dims'}: {err['msg']}" for err in e.errors())
        raise UsageError(f"invalid model dimensions: {problems}") from None


def load_labelled_features(features_path: Path, labels_path: Path) -> Tuple[np.ndarray, LabelSequence]:
    """Read a feature file and its label file and check they cover the same frames."""
    features = read_features(features_path)
    labels = read_labels(labels_path)
    if labels.num_frames != features.shape[0]:
        raise DimensionMismatchError(
            "frame count", f"{features.shape[0]} ({features_path})", f"{labels.num_frames} ({labels_path})"
        )
    return features, labels


def check_feature_dim(model_dim: int, features: np.ndarray, features_path: Path, model_path: Path) -> None:
    if features.shape[1] != model_dim:
        raise DimensionMismatchError(
            "feature dimension", f"{model_dim} ({model_path})", f"{features.shape[1]} ({features_path})"
        )


def selection_for(bg_path: Optional[Path], features: np.ndarray, select_n: Optional[int], model: TiedPldaModel):
    """Top-N component selection from a background model, or None for all components."""
    if bg_path is None or select_n is None:
        return None
    bg = read_background(bg_path)
    if bg.num_components != model.hyper.M:
        raise DimensionMismatchError("component count", model.hyper.M, bg.num_components, str(bg_path))
    return build_selection(bg, features, min(select_n, bg.num_components))


class TrainingService:
    """Runs the generation, background, initialisation, EM and mixing-up steps."""

    def __init__(self, threads: int = 1, deterministic: bool = False):
        self.threads = max(1, threads)
        self.deterministic = deterministic
        self.logger = get_logger("tied_plda.services.training")

    def generate(
        self,
        model_path: Path,
        frames_per_state: int,
        seed: int,
        features_out: Path,
        labels_out: Path,
        create: Optional[Hyperparams] = None,
        substates: int = 1,
        family: ModelFamily = ModelFamily.TIED,
    ) -> int:
        """Sample a synthetic corpus, first writing a random model when ``create`` is given.

        Returns:
            The number of frames written.
        """
        if create is not None:
            model = make_random_model(create, substates, seed=seed, family=family)
            write_model(model, model_path)
            self.logger.info(f"Wrote generating model to {model_path}")
        else:
            model = read_model(model_path)
        Y, labels, _ = sample_corpus(model, frames_per_state, seed)
        write_features(Y, features_out)
        write_labels(labels, labels_out)
        self.logger.info(f"Wrote {Y.shape[0]} frames to {features_out} and {labels_out}")
        return Y.shape[0]

    def train_background(
        self,
        features_path: Path,
        components: int,
        rank: int,
        iterations: int,
        seed: int,
        out: Path,
    ) -> Tuple[BackgroundModel, List[float]]:
        features = read_features(features_path)
        trainer = BackgroundTrainer(components, rank, iterations, seed)
        bg = trainer.fit(features)
        write_background(bg, out)
        self.logger.info(f"Wrote background model ({components} components, rank {rank}) to {out}")
        return bg, trainer.history

    def initialise(
        self,
        bg_path: Path,
        states: int,
        frame_dim: int,
        state_dim: int,
        out: Path,
        seed: int = 0,
        family: ModelFamily = ModelFamily.TIED,
        features_path: Optional[Path] = None,
        labels_path: Optional[Path] = None,
    ) -> TiedPldaModel:
        if (features_path is None) != (labels_path is None):
            raise UsageError("--features and --labels must be given together")
        bg = read_background(bg_path)
        hyper = hyperparams_from_flags(d=bg.dim, p=frame_dim, q=state_dim, M=bg.num_components, J=states)
        summary = None
        if features_path is not None:
            features, labels = load_labelled_features(features_path, labels_path)
            check_feature_dim(bg.dim, features, features_path, bg_path)
            summary = labels.summary(states, features)
        model = init_model(bg, hyper, summary, seed=seed, family=family)
        write_model(model, out)
        self.logger.info(f"Wrote initial model to {out}")
        return model

    def load_training_data(
        self,
        model: TiedPldaModel,
        model_path: Path,
        features_path: Path,
        labels_path: Path,
        config: TrainingConfig,
        bg_path: Optional[Path] = None,
    ) -> TrainingData:
        features, labels = load_labelled_features(features_path, labels_path)
        check_feature_dim(model.hyper.d, features, features_path, model_path)
        labels.validate(model.hyper.J, source=str(labels_path))
        return TrainingData(
            features=features,
            labels=labels,
            selection=selection_for(bg_path, features, config.select_n, model),
            data_variance=labels.summary(model.hyper.J, features).data_variance,
        )

    def train(
        self,
        model_path: Path,
        features_path: Path,
        labels_path: Path,
        out: Path,
        config_path: Optional[Path] = None,
        bg_path: Optional[Path] = None,
        iterations: Optional[int] = None,
        on_report: Optional[Callable[[EmReport], None]] = None,
    ) -> Tuple[TiedPldaModel, List[EmReport]]:
        config = load_training_config(config_path)
        if self.deterministic and not config.deterministic:
            config = config.with_overrides(deterministic=True)
        model = read_model(model_path)
        data = self.load_training_data(model, model_path, features_path, labels_path, config, bg_path)
        model, reports = train(model, data, config, self.threads, callback=on_report, iterations=iterations)
        write_model(model, out)
        self.logger.info(f"Wrote trained model to {out}")
        return model, reports

    def mixup(
        self,
        model_path: Path,
        target: int,
        out: Path,
        seed: int = 0,
        features_path: Optional[Path] = None,
        labels_path: Optional[Path] = None,
        config_path: Optional[Path] = None,
        bg_path: Optional[Path] = None,
    ) -> TiedPldaModel:
        """Split sub-states up to ``target``, ranking by E-step occupancy when data is given."""
        if (features_path is None) != (labels_path is None):
            raise UsageError("--features and --labels must be given together")
        model = read_model(model_path)
        occupancy = None
        if features_path is not None:
            config = load_training_config(config_path)
            data = self.load_training_data(model, model_path, features_path, labels_path, config, bg_path)
            result = estep(model, data, config.likelihood_mode, self.threads, self.deterministic or config.deterministic)
            flat = result.accumulators.substate_occupancy
            offsets = model.substate_offsets()
            occupancy = [flat[offsets[j]:offsets[j + 1]] for j in range(model.hyper.J)]
        model = mixup(model, target, seed=seed, occupancy=occupancy)
        write_model(model, out)
        self.logger.info(f"Wrote mixed-up model ({model.total_substates} sub-states) to {out}")
        return model
