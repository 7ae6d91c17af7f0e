"""Tests for the model containers and parameter counting."""

import unittest

import numpy as np
from pydantic import ValidationError

from tied_plda.errors import ModelInvariantError
from tied_plda.models.params import (
    ComponentParams,
    Hyperparams,
    ModelFamily,
    StateModel,
    TiedPldaModel,
    count_params,
    new_model,
)


class TestHyperparams(unittest.TestCase):

    def test_valid_dimensions(self):
        h = Hyperparams(d=10, p=3, q=3, M=4, J=10)
        self.assertEqual((h.d, h.p, h.q, h.M, h.J), (10, 3, 3, 4, 10))

    def test_rejects_non_positive(self):
        with self.assertRaises(ValidationError):
            Hyperparams(d=0, p=1, q=1, M=1, J=1)

    def test_rejects_latent_wider_than_features(self):
        with self.assertRaises(ValidationError):
            Hyperparams(d=3, p=4, q=1, M=1, J=1)
        with self.assertRaises(ValidationError):
            Hyperparams(d=3, p=1, q=4, M=1, J=1)

    def test_frozen(self):
        h = Hyperparams(d=2, p=1, q=1, M=1, J=1)
        with self.assertRaises(ValidationError):
            h.d = 3


class TestContainers(unittest.TestCase):

    def setUp(self):
        self.hyper = Hyperparams(d=4, p=2, q=2, M=3, J=2)

    def test_new_model_is_neutral(self):
        model = new_model(self.hyper, substates_per_state=2)
        self.assertEqual(model.substate_counts, [2, 2])
        comp = model.components[0]
        np.testing.assert_array_equal(comp.U, np.zeros((4, 2)))
        np.testing.assert_array_equal(comp.Lambda, np.ones(4))
        np.testing.assert_allclose(model.states[0].c, [0.5, 0.5])
        np.testing.assert_allclose(model.states[0].pi, np.full(3, 1.0 / 3.0))

    def test_weight_sum_violation_reported(self):
        with self.assertRaisesRegex(ModelInvariantError, "not normalized"):
            StateModel(z=np.zeros((2, 2)), c=[0.5, 0.6], pi=[1.0])
        with self.assertRaisesRegex(ModelInvariantError, "not normalized"):
            StateModel(z=np.zeros((1, 2)), c=[1.0], pi=[0.2, 0.2])

    def test_negative_lambda_rejected(self):
        with self.assertRaises(ModelInvariantError):
            ComponentParams(U=np.zeros((2, 1)), G=np.zeros((2, 1)), b=np.zeros(2), Lambda=[1.0, 0.0])

    def test_non_finite_rejected(self):
        with self.assertRaises(ModelInvariantError):
            ComponentParams(U=[[np.nan], [0.0]], G=np.zeros((2, 1)), b=np.zeros(2), Lambda=np.ones(2))

    def test_arrays_are_read_only(self):
        model = new_model(self.hyper)
        with self.assertRaises(ValueError):
            model.components[0].b[0] = 1.0

    def test_component_dimension_mismatch(self):
        model = new_model(self.hyper)
        bad = ComponentParams(U=np.zeros((4, 1)), G=np.zeros((4, 2)), b=np.zeros(4), Lambda=np.ones(4))
        with self.assertRaisesRegex(ModelInvariantError, "component 0"):
            model.with_components((bad,) + model.components[1:])

    def test_tied_weight_matrix_is_outer_product(self):
        state = StateModel(z=np.zeros((2, 2)), c=[0.25, 0.75], pi=[0.5, 0.3, 0.2])
        model = new_model(self.hyper).with_states([state, state])
        w = model.weight_matrix(0)
        np.testing.assert_allclose(w, np.outer([0.25, 0.75], [0.5, 0.3, 0.2]))
        self.assertAlmostEqual(float(w.sum()), 1.0)

    def test_mixture_binds_substates_to_components(self):
        model = new_model(self.hyper, substates_per_state=None, family=ModelFamily.MIXTURE)
        self.assertTrue(model.is_mixture)
        self.assertEqual(model.substate_counts, [3, 3])
        np.testing.assert_allclose(model.weight_matrix(1), np.diag(np.full(3, 1.0 / 3.0)))
        self.assertTrue(np.isneginf(model.log_weight_matrix(1)[0, 1]))

    def test_mixture_requires_one_substate_per_component(self):
        with self.assertRaises(ValueError):
            new_model(self.hyper, substates_per_state=2, family=ModelFamily.MIXTURE)
        state = StateModel(z=np.zeros((2, 2)), c=[0.5, 0.5], pi=np.full(3, 1.0 / 3.0))
        model = new_model(self.hyper, substates_per_state=None, family=ModelFamily.MIXTURE)
        with self.assertRaises(ModelInvariantError):
            TiedPldaModel(self.hyper, model.components, [state, state], ModelFamily.MIXTURE)

    def test_substate_offsets(self):
        model = new_model(self.hyper, substates_per_state=3)
        np.testing.assert_array_equal(model.substate_offsets(), [0, 3, 6])

    def test_equals_is_bit_exact(self):
        a = new_model(self.hyper)
        b = new_model(self.hyper)
        self.assertTrue(a.equals(b))
        comp = a.components[0].replace(b=np.full(4, 1e-300))
        self.assertFalse(a.with_components((comp,) + a.components[1:]).equals(b))


class TestCountParams(unittest.TestCase):

    def test_state_independent_count(self):
        model = new_model(Hyperparams(d=91, p=40, q=40, M=400, J=1))
        _, independent = count_params(model)
        self.assertEqual(independent, 400 * (91 * 40 + 91 * 40 + 2 * 91))

    def test_tied_state_dependent_count(self):
        hyper = Hyperparams(d=5, p=2, q=3, M=4, J=2)
        model = new_model(hyper, substates_per_state=2)
        dependent, _ = count_params(model)
        # per state: 2 sub-states * (q + 1) + 4 active component weights
        self.assertEqual(dependent, 2 * (2 * 4 + 4))

    def test_inactive_weights_not_counted(self):
        hyper = Hyperparams(d=5, p=2, q=3, M=4, J=1)
        state = StateModel(z=np.zeros((1, 3)), c=[1.0], pi=[0.995, 0.001, 0.002, 0.002])
        model = new_model(hyper).with_states([state])
        dependent, _ = count_params(model)
        self.assertEqual(dependent, 1 * 4 + 1)

    def test_explicit_active_counts(self):
        hyper = Hyperparams(d=5, p=2, q=3, M=4, J=2)
        model = new_model(hyper)
        dependent, _ = count_params(model, active_components_per_state=[2, 3])
        self.assertEqual(dependent, (4 + 2) + (4 + 3))
        with self.assertRaises(ValueError):
            count_params(model, active_components_per_state=[1])

    def test_tied_smaller_than_mixture(self):
        hyper = Hyperparams(d=10, p=3, q=3, M=8, J=5)
        tied, _ = count_params(new_model(hyper, substates_per_state=2))
        mixture, _ = count_params(new_model(hyper, substates_per_state=None, family=ModelFamily.MIXTURE))
        self.assertLess(tied, mixture)


if __name__ == '__main__':
    unittest.main()
