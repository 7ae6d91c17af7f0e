"""PLDABGM1 background model files.

Layout: magic ``PLDABGM1``; unsigned 32-bit little-endian version (=1), d, r,
M; then per component the mean (d), loading W (d*r, row-major), noise psi (d)
and weight omega (1), all as 64-bit little-endian IEEE-754.
"""

import numpy as np

from ..errors import ModelInvariantError
from ..models.background import BackgroundModel
from .binary import BinaryReader, PathOrFile, f64, load_bytes, store_bytes, u32

BACKGROUND_MAGIC = b"PLDABGM1"
BACKGROUND_VERSION = 1


def write_background(bg: BackgroundModel, destination: PathOrFile) -> None:
    chunks = [BACKGROUND_MAGIC, u32(BACKGROUND_VERSION), u32(bg.dim), u32(bg.rank), u32(bg.num_components)]
    for m in range(bg.num_components):
        chunks.extend([
            f64(bg.means[m]),
            f64(bg.loadings[m]),
            f64(bg.noise[m]),
            f64([bg.weights[m]]),
        ])
    store_bytes(destination, chunks)


def read_background(source: PathOrFile) -> BackgroundModel:
    payload, name = load_bytes(source)
    reader = BinaryReader(payload, name)
    reader.magic(BACKGROUND_MAGIC)
    version = reader.u32("version")
    if version != BACKGROUND_VERSION:
        raise reader.fail(f"unsupported background model version {version}")
    d = reader.u32("d")
    r = reader.u32("r")
    M = reader.u32("M")
    if d < 1 or M < 1 or r > d:
        raise reader.fail(f"invalid dimensions d={d}, r={r}, M={M}")

    means = np.empty((M, d))
    loadings = np.empty((M, d, r))
    noise = np.empty((M, d))
    weights = np.empty(M)
    for m in range(M):
        means[m] = reader.f64(d, f"mean of component {m}")
        loadings[m] = reader.f64(d * r, f"loading of component {m}").reshape(d, r)
        noise[m] = reader.f64(d, f"noise of component {m}")
        weights[m] = reader.f64_scalar(f"weight of component {m}")
    reader.finish()
    try:
        return BackgroundModel(means=means, loadings=loadings, noise=noise, weights=weights)
    except ModelInvariantError as exc:
        raise reader.fail(str(exc)) from None
