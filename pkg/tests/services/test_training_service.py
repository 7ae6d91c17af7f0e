"""Tests for the training service."""

import numpy as np
import pytest

from tied_plda.errors import DimensionMismatchError, UsageError
from tied_plda.models.params import Hyperparams, ModelFamily
from tied_plda.services import TrainingService, hyperparams_from_flags
from tied_plda.storage import (
    read_background,
    read_features,
    read_labels,
    read_model,
    write_background,
    write_features,
    write_model,
)

from tests.helpers import background_from_model


@pytest.fixture
def corpus(tmp_path):
    service = TrainingService()
    hyper = Hyperparams(d=4, p=2, q=2, M=3, J=3)
    service.generate(
        tmp_path / "gen.tpm", 80, seed=1,
        features_out=tmp_path / "train.feat", labels_out=tmp_path / "train.lab",
        create=hyper, substates=2,
    )
    return tmp_path


def test_hyperparams_from_flags():
    assert hyperparams_from_flags(d=4, p=2, q=2, M=3, J=3).M == 3
    with pytest.raises(UsageError, match="invalid model dimensions"):
        hyperparams_from_flags(d=2, p=3, q=1, M=1, J=1)


def test_generate_writes_model_and_corpus(corpus):
    model = read_model(corpus / "gen.tpm")
    assert model.substate_counts == [2, 2, 2]
    assert read_features(corpus / "train.feat").shape == (240, 4)
    assert read_labels(corpus / "train.lab").num_frames == 240


def test_generate_from_existing_model(corpus):
    frames = TrainingService().generate(
        corpus / "gen.tpm", 5, seed=2, features_out=corpus / "more.feat", labels_out=corpus / "more.lab"
    )
    assert frames == 15


def test_background_init_train_mixup(corpus):
    service = TrainingService(threads=2, deterministic=True)
    bg, history = service.train_background(corpus / "train.feat", 3, rank=2, iterations=4, seed=0, out=corpus / "bg.tbg")
    assert read_background(corpus / "bg.tbg").equals(bg)
    assert len(history) == 5

    model = service.initialise(
        corpus / "bg.tbg", states=3, frame_dim=2, state_dim=2, out=corpus / "init.tpm",
        features_path=corpus / "train.feat", labels_path=corpus / "train.lab",
    )
    assert read_model(corpus / "init.tpm").equals(model)

    seen = []
    trained, reports = service.train(
        corpus / "init.tpm", corpus / "train.feat", corpus / "train.lab", corpus / "trained.tpm",
        bg_path=corpus / "bg.tbg", iterations=2, on_report=seen.append,
    )
    assert len(reports) == 2 and seen == reports
    assert read_model(corpus / "trained.tpm").equals(trained)

    grown = service.mixup(
        corpus / "trained.tpm", 6, corpus / "mixed.tpm",
        features_path=corpus / "train.feat", labels_path=corpus / "train.lab",
    )
    assert grown.total_substates == 6
    assert read_model(corpus / "mixed.tpm").total_substates == 6


def test_initialise_mixture_without_data(corpus):
    write_background(background_from_model(read_model(corpus / "gen.tpm")), corpus / "bg.tbg")
    model = TrainingService().initialise(
        corpus / "bg.tbg", states=4, frame_dim=1, state_dim=1, out=corpus / "mix.tpm", family=ModelFamily.MIXTURE
    )
    assert model.is_mixture and model.hyper.J == 4


def test_features_and_labels_go_together(corpus):
    with pytest.raises(UsageError, match="together"):
        TrainingService().initialise(
            corpus / "gen.tpm", 3, 2, 2, corpus / "x.tpm", features_path=corpus / "train.feat"
        )


def test_feature_dimension_mismatch_names_both_files(corpus):
    write_features(np.zeros((240, 5)), corpus / "wide.feat")
    with pytest.raises(DimensionMismatchError) as info:
        TrainingService().train(corpus / "gen.tpm", corpus / "wide.feat", corpus / "train.lab", corpus / "out.tpm")
    message = str(info.value)
    assert "gen.tpm" in message and "wide.feat" in message


def test_frame_count_mismatch(corpus):
    write_features(np.zeros((10, 4)), corpus / "short.feat")
    with pytest.raises(DimensionMismatchError, match="frame count"):
        TrainingService().train(corpus / "gen.tpm", corpus / "short.feat", corpus / "train.lab", corpus / "out.tpm")


def test_background_component_count_must_match(corpus):
    model = read_model(corpus / "gen.tpm")
    TrainingService().train_background(corpus / "train.feat", 2, rank=1, iterations=1, seed=0, out=corpus / "bg2.tbg")
    write_model(model, corpus / "copy.tpm")
    with pytest.raises(DimensionMismatchError, match="component count"):
        TrainingService().train(
            corpus / "copy.tpm", corpus / "train.feat", corpus / "train.lab", corpus / "out.tpm",
            bg_path=corpus / "bg2.tbg",
        )
