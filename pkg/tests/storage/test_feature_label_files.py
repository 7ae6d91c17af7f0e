"""Tests for PLDAFEA1 feature files and PLDALBL1 label files."""

import io
import struct
import unittest

import numpy as np

from tied_plda.data.labels import LabelSequence
from tied_plda.errors import DataFormatError
from tied_plda.storage import read_features, read_labels, write_features, write_labels
from tied_plda.storage.feature_file import FEATURE_MAGIC
from tied_plda.storage.label_file import LABEL_MAGIC


def _named(payload: bytes, name: str) -> io.BytesIO:
    stream = io.BytesIO(payload)
    stream.name = name
    return stream


class TestFeatureFile(unittest.TestCase):

    def test_round_trip_is_bit_identical(self):
        features = np.random.default_rng(0).normal(size=(17, 5))
        buffer = io.BytesIO()
        write_features(features, buffer)
        restored = read_features(_named(buffer.getvalue(), "a.fea"))
        self.assertEqual(restored.tobytes(), features.tobytes())

    def test_header_disagrees_with_payload(self):
        payload = FEATURE_MAGIC + struct.pack("<IQQ", 1, 3, 2) + np.zeros(5).tobytes()
        with self.assertRaisesRegex(DataFormatError, "header declares 3x2"):
            read_features(_named(payload, "a.fea"))

    def test_nan_entry_names_frame_and_dimension(self):
        values = np.zeros((4, 3))
        values[2, 1] = np.nan
        payload = FEATURE_MAGIC + struct.pack("<IQQ", 1, 4, 3) + values.astype("<f8").tobytes()
        with self.assertRaisesRegex(DataFormatError, "frame 2, dimension 1"):
            read_features(_named(payload, "nan.fea"))

    def test_empty_matrix(self):
        buffer = io.BytesIO()
        write_features(np.zeros((0, 3)), buffer)
        self.assertEqual(read_features(_named(buffer.getvalue(), "e.fea")).shape, (0, 3))

    def test_rejects_vector(self):
        with self.assertRaises(DataFormatError):
            write_features(np.zeros(3), io.BytesIO())


class TestLabelFile(unittest.TestCase):

    def _round_trip(self, labels: LabelSequence) -> LabelSequence:
        buffer = io.BytesIO()
        write_labels(labels, buffer)
        return read_labels(_named(buffer.getvalue(), "l.lbl"))

    def test_hard_round_trip(self):
        labels = LabelSequence.from_hard([0, 2, 1, 1, 0])
        restored = self._round_trip(labels)
        self.assertTrue(restored.is_hard)
        self.assertTrue(restored.equals(labels))

    def test_soft_round_trip(self):
        labels = LabelSequence.from_soft([[(0, 0.75), (1, 0.25)], [], [(2, 1.0)]])
        restored = self._round_trip(labels)
        self.assertFalse(restored.is_hard)
        self.assertTrue(restored.equals(labels))

    def test_hard_count_mismatch(self):
        payload = LABEL_MAGIC + struct.pack("<IQ", 1, 4) + struct.pack("<3I", 0, 1, 2)
        with self.assertRaisesRegex(DataFormatError, "^l.lbl: header declares 4 labels"):
            read_labels(_named(payload, "l.lbl"))

    def test_soft_mass_above_one_rejected(self):
        payload = LABEL_MAGIC + struct.pack("<IQ", 2, 1) + struct.pack("<I", 2)
        payload += struct.pack("<Id", 0, 0.7) + struct.pack("<Id", 1, 0.6)
        with self.assertRaisesRegex(DataFormatError, "^l.lbl: "):
            read_labels(_named(payload, "l.lbl"))

    def test_unknown_version(self):
        payload = LABEL_MAGIC + struct.pack("<IQ", 3, 0)
        with self.assertRaisesRegex(DataFormatError, "unsupported label version 3"):
            read_labels(_named(payload, "l.lbl"))


if __name__ == '__main__':
    unittest.main()
