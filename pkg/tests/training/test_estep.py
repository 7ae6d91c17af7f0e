"""Tests for the two-sweep E-step."""

import numpy as np
import pytest

from tied_plda.config import SHARD_SIZE
from tied_plda.data.labels import LabelSequence
from tied_plda.data.synthetic import sample_corpus
from tied_plda.errors import DataFormatError, DimensionMismatchError, NumericalError
from tied_plda.inference.likelihood import loglik_uncertainty
from tied_plda.training.estep import TrainingData, estep, responsibilities, shard_bounds


@pytest.fixture
def data(model):
    Y, labels, _ = sample_corpus(model, 1700, seed=11)
    return TrainingData(features=Y, labels=labels)


def _accumulator_bytes(result) -> bytes:
    acc = result.accumulators
    arrays = [acc.occupancy, acc.y_sums, acc.x_sums, acc.yy_diag, acc.xy, acc.xx, result.z.means]
    return b"".join(a.tobytes() for a in arrays) + np.float64(result.loglik).tobytes()


class TestShardBounds:

    def test_deterministic_uses_fixed_shards(self):
        bounds = shard_bounds(2 * SHARD_SIZE + 5, threads=7, deterministic=True)
        assert bounds == [(0, SHARD_SIZE), (SHARD_SIZE, 2 * SHARD_SIZE), (2 * SHARD_SIZE, 2 * SHARD_SIZE + 5)]

    def test_free_mode_splits_by_threads(self):
        assert shard_bounds(10, threads=3, deterministic=False) == [(0, 4), (4, 8), (8, 10)]

    def test_empty(self):
        assert shard_bounds(0, threads=4, deterministic=True) == []


class TestResponsibilities:

    def test_sum_to_mass_and_match_terms(self, rng, model):
        Y = rng.normal(size=(5, 4))
        gamma = responsibilities(model, 1, Y, masses=np.full(5, 0.5))
        assert gamma.shape == (5, 2, 3)
        np.testing.assert_allclose(gamma.sum(axis=(1, 2)), 0.5)
        score = loglik_uncertainty(model, 1, Y[2])
        np.testing.assert_allclose(gamma[2], 0.5 * np.exp(score.terms - score.total), rtol=1e-10)

    def test_selection_zeroes_unselected(self, rng, model):
        Y = rng.normal(size=(3, 4))
        gamma = responsibilities(model, 0, Y, selection=np.array([[0], [1], [2]]))
        assert gamma[0, :, 1:].sum() == 0.0
        np.testing.assert_allclose(gamma.sum(axis=(1, 2)), 1.0)


class TestEStep:

    def test_occupancy_equals_label_mass(self, model, data):
        result = estep(model, data)
        assert result.frames == pytest.approx(data.num_frames)
        assert result.accumulators.occupancy.sum() == pytest.approx(data.num_frames, rel=1e-10)
        assert result.z.means.shape == (model.total_substates, model.hyper.q)

    def test_soft_labels_scale_statistics(self, model, data):
        hard = estep(model, data)
        halves = [[(int(s), 0.5)] for s in data.labels.hard_states()]
        soft = estep(model, TrainingData(features=data.features, labels=LabelSequence.from_soft(halves)))
        assert soft.frames == pytest.approx(0.5 * hard.frames)
        assert soft.avg_loglik == pytest.approx(hard.avg_loglik, rel=1e-10)

    def test_loglik_matches_per_frame_sum(self, model):
        Y, labels, _ = sample_corpus(model, 4, seed=3)
        result = estep(model, TrainingData(features=Y, labels=labels))
        expected = sum(loglik_uncertainty(model, int(j), y).total for y, j in zip(Y, labels.hard_states()))
        assert result.loglik == pytest.approx(expected, rel=1e-12)

    def test_deterministic_mode_ignores_thread_count(self, model, data):
        assert data.labels.num_entries > SHARD_SIZE
        one = estep(model, data, threads=1, deterministic=True)
        four = estep(model, data, threads=4, deterministic=True)
        assert _accumulator_bytes(one) == _accumulator_bytes(four)

    def test_free_mode_agrees_numerically(self, model, data):
        one = estep(model, data, threads=1, deterministic=True)
        free = estep(model, data, threads=3, deterministic=False)
        np.testing.assert_allclose(free.accumulators.xx, one.accumulators.xx, rtol=1e-9)
        assert free.loglik == pytest.approx(one.loglik, rel=1e-12)

    def test_no_frames(self, model):
        empty = TrainingData(features=np.zeros((0, 4)), labels=LabelSequence.from_hard([]))
        with pytest.raises(NumericalError, match="no frames"):
            estep(model, empty)

    def test_state_out_of_range(self, model):
        labels = LabelSequence.from_hard([0, 3])
        with pytest.raises(DataFormatError):
            estep(model, TrainingData(features=np.zeros((2, 4)), labels=labels))

    def test_feature_dimension_mismatch(self, model):
        labels = LabelSequence.from_hard([0, 1])
        with pytest.raises(DimensionMismatchError):
            estep(model, TrainingData(features=np.zeros((2, 5)), labels=labels))

    def test_frame_count_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            TrainingData(features=np.zeros((3, 4)), labels=LabelSequence.from_hard([0, 1]))
