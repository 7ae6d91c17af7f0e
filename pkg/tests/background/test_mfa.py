"""Tests for background model training."""

import unittest

import numpy as np
from scipy.stats import multivariate_normal

from tied_plda.background.mfa import BackgroundTrainer, component_log_joint, train_bg
from tied_plda.errors import DataFormatError, UsageError
from tied_plda.models.background import BackgroundModel


def _clustered(seed=0, frames=600):
    rng = np.random.default_rng(seed)
    centres = np.array([[0.0, 0.0, 0.0], [20.0, 0.0, 0.0], [0.0, 20.0, 0.0]])
    labels = rng.integers(3, size=frames)
    return centres, centres[labels] + rng.normal(size=(frames, 3))


class TestComponentLogJoint(unittest.TestCase):

    def test_matches_dense_density(self):
        rng = np.random.default_rng(1)
        bg = BackgroundModel(
            means=rng.normal(size=(2, 3)),
            loadings=rng.normal(size=(2, 3, 2)),
            noise=rng.uniform(0.5, 1.5, size=(2, 3)),
            weights=np.array([0.3, 0.7]),
        )
        Y = rng.normal(size=(5, 3))
        scores = component_log_joint(bg, Y)
        for m in range(2):
            cov = bg.loadings[m] @ bg.loadings[m].T + np.diag(bg.noise[m])
            expected = np.log(bg.weights[m]) + multivariate_normal(bg.means[m], cov).logpdf(Y)
            np.testing.assert_allclose(scores[:, m], expected, rtol=1e-10)


class TestBackgroundTrainer(unittest.TestCase):

    def test_history_never_decreases(self):
        _, Y = _clustered()
        trainer = BackgroundTrainer(3, rank=1, iterations=10, seed=2)
        trainer.fit(Y)
        history = np.array(trainer.history)
        self.assertEqual(history.shape, (11,))
        self.assertTrue(np.all(np.diff(history) >= -1e-9 * np.abs(history[1:])))

    def test_recovers_separated_means(self):
        centres, Y = _clustered(seed=3)
        bg = train_bg(Y, 3, rank=0, iterations=25, seed=0)
        for centre in centres:
            distances = np.linalg.norm(bg.means - centre, axis=1)
            self.assertLess(distances.min(), 0.5)
        self.assertAlmostEqual(bg.weights.sum(), 1.0)

    def test_initialise_picks_frames(self):
        _, Y = _clustered()
        bg = BackgroundTrainer(4, rank=2, seed=5).initialise(Y)
        for mean in bg.means:
            self.assertTrue(np.any(np.all(Y == mean, axis=1)))
        np.testing.assert_allclose(bg.weights, 0.25)
        self.assertEqual(bg.loadings.shape, (4, 3, 2))

    def test_seed_is_reproducible(self):
        _, Y = _clustered()
        first = train_bg(Y, 3, rank=1, iterations=3, seed=9)
        self.assertTrue(first.equals(train_bg(Y, 3, rank=1, iterations=3, seed=9)))

    def test_zero_iterations_returns_initial_model(self):
        _, Y = _clustered()
        trainer = BackgroundTrainer(2, rank=1, iterations=0, seed=1)
        self.assertTrue(trainer.fit(Y).equals(trainer.initialise(Y)))
        self.assertEqual(len(trainer.history), 1)

    def test_argument_errors(self):
        with self.assertRaises(UsageError):
            BackgroundTrainer(0, rank=1)
        with self.assertRaises(UsageError):
            BackgroundTrainer(2, rank=-1)
        with self.assertRaises(UsageError):
            BackgroundTrainer(2, rank=4).fit(np.zeros((10, 3)))

    def test_data_errors(self):
        with self.assertRaises(DataFormatError):
            BackgroundTrainer(2, rank=1).fit(np.zeros(10))
        with self.assertRaisesRegex(DataFormatError, "fewer than the 5 components"):
            BackgroundTrainer(5, rank=1).fit(np.zeros((3, 3)))
