"""Tests for label sequences."""

import unittest

import numpy as np

from tied_plda.data.labels import LabelSequence
from tied_plda.errors import DataFormatError, DimensionMismatchError


class TestLabelSequence(unittest.TestCase):

    def test_hard_labels(self):
        labels = LabelSequence.from_hard([2, 0, 1])
        self.assertTrue(labels.is_hard)
        self.assertEqual(len(labels), 3)
        np.testing.assert_array_equal(labels.hard_states(), [2, 0, 1])
        np.testing.assert_array_equal(labels.frame_mass(), [1.0, 1.0, 1.0])

    def test_soft_labels_hard_states_pick_largest_mass(self):
        labels = LabelSequence.from_soft([[(0, 0.3), (1, 0.7)], [], [(2, 0.5)]])
        np.testing.assert_array_equal(labels.hard_states(), [1, -1, 2])
        np.testing.assert_allclose(labels.frame_mass(), [1.0, 0.0, 0.5])
        self.assertEqual(labels.entries()[0], [(0, 0.3), (1, 0.7)])

    def test_masses_outside_unit_interval(self):
        with self.assertRaises(DataFormatError):
            LabelSequence.from_soft([[(0, 1.5)]])
        with self.assertRaises(DataFormatError):
            LabelSequence.from_soft([[(0, -0.1)]])

    def test_frame_masses_above_one(self):
        with self.assertRaisesRegex(DataFormatError, "frame 0"):
            LabelSequence.from_soft([[(0, 0.6), (1, 0.6)]])

    def test_validate_state_range_and_frame_count(self):
        labels = LabelSequence.from_hard([0, 3])
        with self.assertRaisesRegex(DataFormatError, "state index 3"):
            labels.validate(3)
        with self.assertRaises(DimensionMismatchError):
            labels.validate(4, num_frames=5)
        labels.validate(4, num_frames=2)

    def test_summary(self):
        labels = LabelSequence.from_hard([0, 0, 2, 2])
        features = np.array([[0.0], [2.0], [4.0], [6.0]])
        summary = labels.summary(4, features)
        np.testing.assert_allclose(summary.state_counts, [2, 0, 2, 0])
        np.testing.assert_allclose(summary.data_variance, [5.0])
        self.assertEqual(summary.empty_states, [1, 3])

    def test_subset_renumbers_frames(self):
        labels = LabelSequence.from_soft([[(0, 1.0)], [(1, 0.4), (2, 0.6)], [(3, 1.0)]])
        sub = labels.subset(np.array([1, 2]))
        self.assertEqual(sub.num_frames, 2)
        self.assertEqual(sub.entries(), [[(1, 0.4), (2, 0.6)], [(3, 1.0)]])


if __name__ == '__main__':
    unittest.main()
