"""Tests for the M-step updates and weight flooring."""

import unittest

import numpy as np
import pytest

from tied_plda.data.labels import LabelSequence
from tied_plda.data.synthetic import sample_corpus
from tied_plda.models.params import ModelFamily
from tied_plda.training.estep import TrainingData, estep
from tied_plda.training.mstep import (
    auxiliary,
    floor_weights,
    residual_energy,
    solve_symmetric,
    update_b,
    update_G,
    update_Lambda,
    update_U,
    update_weights,
)

from tests.helpers import small_model


@pytest.fixture
def moments(model):
    Y, labels, _ = sample_corpus(model, 400, seed=5)
    result = estep(model, TrainingData(features=Y, labels=labels))
    return model, result.accumulators, result.z


def _shifted(comp, name, index, delta):
    values = getattr(comp, name).copy()
    values[index] += delta
    return comp.replace(**{name: values})


def _gradient(acc, z, m, comp, name, index, step, z_uncertainty=False):
    up = auxiliary(acc, z, m, _shifted(comp, name, index, step), z_uncertainty)
    down = auxiliary(acc, z, m, _shifted(comp, name, index, -step), z_uncertainty)
    return (up - down) / (2.0 * step)


class TestUpdatesMaximiseTheirBlock:

    def test_U_is_stationary(self, moments):
        model, acc, z = moments
        for m, comp in enumerate(model.components):
            comp = comp.replace(U=update_U(acc, z, m, comp)[0])
            n = acc.component_occupancy[m]
            for index in np.ndindex(comp.U.shape):
                assert abs(_gradient(acc, z, m, comp, "U", index, 1e-3)) / n < 1e-6

    def test_G_is_stationary_under_z_uncertainty(self, moments):
        model, acc, z = moments
        for m, comp in enumerate(model.components):
            comp = comp.replace(G=update_G(acc, z, m, comp)[0])
            n = acc.component_occupancy[m]
            for index in np.ndindex(comp.G.shape):
                assert abs(_gradient(acc, z, m, comp, "G", index, 1e-3, z_uncertainty=True)) / n < 1e-6

    def test_b_is_stationary(self, moments):
        model, acc, z = moments
        for m, comp in enumerate(model.components):
            comp = comp.replace(b=update_b(acc, z, m, comp))
            n = acc.component_occupancy[m]
            for i in range(comp.d):
                assert abs(_gradient(acc, z, m, comp, "b", i, 1e-3)) / n < 1e-6

    def test_Lambda_is_stationary(self, moments):
        model, acc, z = moments
        for m, comp in enumerate(model.components):
            Lambda, floored = update_Lambda(acc, z, m, comp, np.zeros(comp.d))
            assert floored == 0
            comp = comp.replace(Lambda=Lambda)
            n = acc.component_occupancy[m]
            for i in range(comp.d):
                step = 1e-5 * comp.Lambda[i]
                assert abs(_gradient(acc, z, m, comp, "Lambda", i, step)) / n < 1e-5

    def test_sequence_never_decreases_auxiliary(self, moments):
        model, acc, z = moments
        for m, comp in enumerate(model.components):
            checks = [
                ("U", False, lambda c: update_U(acc, z, m, c)[0]),
                ("G", True, lambda c: update_G(acc, z, m, c)[0]),
                ("b", False, lambda c: update_b(acc, z, m, c)),
                ("Lambda", False, lambda c: update_Lambda(acc, z, m, c, np.zeros(c.d))[0]),
            ]
            for name, uncertain, update in checks:
                before = auxiliary(acc, z, m, comp, uncertain)
                comp = comp.replace(**{name: update(comp)})
                after = auxiliary(acc, z, m, comp, uncertain)
                assert after >= before - 1e-8 * max(1.0, abs(before)), name

    def test_Lambda_is_mean_residual_energy(self, moments):
        model, acc, z = moments
        comp = model.components[0]
        Lambda, _ = update_Lambda(acc, z, 0, comp, np.zeros(comp.d))
        expected = residual_energy(acc, z, 0, comp) / acc.component_occupancy[0]
        np.testing.assert_allclose(Lambda, expected, rtol=1e-12)

    def test_Lambda_floor_is_counted(self, moments):
        model, acc, z = moments
        comp = model.components[1]
        Lambda, floored = update_Lambda(acc, z, 1, comp, np.full(comp.d, 1e6))
        assert floored == comp.d
        np.testing.assert_array_equal(Lambda, 1e6)


class TestWeightUpdate:

    def test_tied_weights_are_normalised_occupancies(self, moments):
        model, acc, _ = moments
        weights, floored = update_weights(acc, model, floor=0.0)
        assert floored == 0
        offsets = model.substate_offsets()
        for j, (c, pi) in enumerate(weights):
            n = acc.occupancy[offsets[j]:offsets[j + 1]]
            np.testing.assert_allclose(c, n.sum(axis=1) / n.sum())
            np.testing.assert_allclose(pi, n.sum(axis=0) / n.sum())

    def test_mixture_binds_pi_to_c(self):
        model = small_model(family=ModelFamily.MIXTURE)
        Y, labels, _ = sample_corpus(model, 200, seed=9)
        acc = estep(model, TrainingData(features=Y, labels=labels)).accumulators
        weights, _ = update_weights(acc, model, floor=1e-5)
        for c, pi in weights:
            np.testing.assert_array_equal(c, pi)
            assert c.sum() == pytest.approx(1.0)

    def test_state_without_frames_keeps_weights(self, model):
        Y, labels, _ = sample_corpus(model, 50, seed=2)
        keep = np.flatnonzero(labels.states != 2)
        data = TrainingData(features=Y[keep], labels=LabelSequence.from_hard(labels.states[keep]))
        acc = estep(model, data).accumulators
        weights, _ = update_weights(acc, model, floor=1e-5)
        np.testing.assert_array_equal(weights[2][0], model.states[2].c)
        np.testing.assert_array_equal(weights[2][1], model.states[2].pi)


class TestFloorWeights(unittest.TestCase):

    def test_normalises_without_floor(self):
        weights, floored = floor_weights(np.array([1.0, 3.0]), 0.0)
        np.testing.assert_allclose(weights, [0.25, 0.75])
        self.assertEqual(floored, 0)

    def test_shares_remaining_mass_proportionally(self):
        weights, floored = floor_weights(np.array([0.5, 0.5, 0.0, 0.0]), 0.1)
        np.testing.assert_allclose(weights, [0.4, 0.4, 0.1, 0.1])
        self.assertEqual(floored, 2)

    def test_repeats_until_no_free_entry_is_low(self):
        raw = np.array([0.7, 0.101, 0.001, 0.198])
        weights, floored = floor_weights(raw, 0.1)
        self.assertEqual(floored, 2)
        np.testing.assert_allclose(weights[[1, 2]], 0.1)
        self.assertAlmostEqual(weights.sum(), 1.0, places=12)
        self.assertAlmostEqual(weights[0] / weights[3], 0.7 / 0.198, places=12)

    def test_floor_must_leave_mass(self):
        with self.assertRaises(ValueError):
            floor_weights(np.ones(4), 0.25)


class TestSolveSymmetric(unittest.TestCase):

    def test_regular_matrix(self):
        matrix = np.array([[4.0, 1.0], [1.0, 3.0]])
        solution, ridged = solve_symmetric(matrix, np.array([1.0, 2.0]))
        self.assertFalse(ridged)
        np.testing.assert_allclose(matrix @ solution, [1.0, 2.0])

    def test_singular_matrix_gets_ridge(self):
        matrix = np.ones((2, 2))
        solution, ridged = solve_symmetric(matrix, np.array([[2.0], [2.0]]))
        self.assertTrue(ridged)
        np.testing.assert_allclose(solution.ravel(), [1.0, 1.0], rtol=1e-6)
