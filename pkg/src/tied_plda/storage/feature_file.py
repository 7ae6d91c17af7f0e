"""PLDAFEA1 feature matrices.

Layout: magic ``PLDAFEA1``, u32 version (=1), u64 rows, u64 cols, then the
row-major payload as little-endian doubles.
"""

import numpy as np

from ..errors import DataFormatError
from ..utils.logging import get_logger
from .binary import BinaryReader, PathOrFile, f64, load_bytes, store_bytes, u32, u64

logger = get_logger(__name__)

FEATURE_MAGIC = b"PLDAFEA1"
FEATURE_VERSION = 1


def write_features(features: np.ndarray, destination: PathOrFile) -> None:
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2:
        raise DataFormatError(f"features must be a matrix, got shape {features.shape}")
    rows, cols = features.shape
    store_bytes(destination, [FEATURE_MAGIC, u32(FEATURE_VERSION), u64(rows), u64(cols), f64(features)])
    logger.debug(f"Wrote {rows}x{cols} features to {destination}")


def read_features(source: PathOrFile) -> np.ndarray:
    """Read a feature matrix of shape (frames, dimension).

    Raises:
        DataFormatError: on bad magic or version, a header that disagrees with
            the payload length, or a non-finite entry (the message names the
            frame and dimension).
    """
    payload, name = load_bytes(source)
    reader = BinaryReader(payload, name)
    reader.magic(FEATURE_MAGIC)
    version = reader.u32("version")
    if version != FEATURE_VERSION:
        raise reader.fail(f"unsupported feature version {version}")
    rows = reader.u64("row count")
    cols = reader.u64("column count")
    expected = rows * cols * 8
    if reader.remaining() != expected:
        raise reader.fail(
            f"header declares {rows}x{cols} values ({expected} bytes) but the payload has {reader.remaining()} bytes"
        )
    features = reader.f64(rows * cols, "feature payload").reshape(rows, cols)
    bad = np.argwhere(~np.isfinite(features))
    if bad.size:
        t, i = (int(v) for v in bad[0])
        raise reader.fail(f"non-finite value {features[t, i]!r} at frame {t}, dimension {i}")
    logger.debug(f"Read {rows}x{cols} features from {name}")
    return features
