"""PLDAMDL1 model files.

Layout (all integers unsigned 32-bit little-endian, all reals IEEE-754
64-bit little-endian)::

    magic "PLDAMDL1"
    version (=1), family (0 tied, 1 mixture), d, p, q, M, J
    per component m: U (d*p, row-major), G (d*q, row-major), b (d), Lambda (d)
    per state j: K_j, then K_j records of (z [q], c), then pi [M]
"""

from pydantic import ValidationError

from ..errors import DataFormatError, ModelInvariantError
from ..models.params import ComponentParams, Hyperparams, ModelFamily, StateModel, TiedPldaModel
from ..utils.logging import get_logger
from .binary import BinaryReader, PathOrFile, f64, load_bytes, store_bytes, u32

logger = get_logger(__name__)

MODEL_MAGIC = b"PLDAMDL1"
MODEL_VERSION = 1


def write_model(model: TiedPldaModel, destination: PathOrFile) -> None:
    """Serialize a model bit-exactly."""
    h = model.hyper
    chunks = [
        MODEL_MAGIC,
        u32(MODEL_VERSION),
        u32(int(model.family)),
        u32(h.d), u32(h.p), u32(h.q), u32(h.M), u32(h.J),
    ]
    for comp in model.components:
        chunks.extend([f64(comp.U), f64(comp.G), f64(comp.b), f64(comp.Lambda)])
    for state in model.states:
        chunks.append(u32(state.num_substates))
        for k in range(state.num_substates):
            chunks.append(f64(state.z[k]))
            chunks.append(f64([state.c[k]]))
        chunks.append(f64(state.pi))
    store_bytes(destination, chunks)
    logger.debug(f"Wrote model (J={h.J}, M={h.M}, sub-states={model.total_substates}) to {destination}")


def read_model(source: PathOrFile) -> TiedPldaModel:
    """Read and validate a model file.

    Raises:
        DataFormatError: bad magic or version, truncated data, trailing bytes,
            invalid dimensions, non-finite values or weights whose sum differs
            from one by more than 1e-6.
    """
    payload, name = load_bytes(source)
    reader = BinaryReader(payload, name)
    reader.magic(MODEL_MAGIC)
    version = reader.u32("version")
    if version != MODEL_VERSION:
        raise reader.fail(f"unsupported model version {version}")
    family_code = reader.u32("family flag")
    if family_code not in (ModelFamily.TIED, ModelFamily.MIXTURE):
        raise reader.fail(f"unknown model family flag {family_code}")
    d, p, q, M, J = (reader.u32(field) for field in ("d", "p", "q", "M", "J"))
    try:
        hyper = Hyperparams(d=d, p=p, q=q, M=M, J=J)
    except ValidationError as exc:
        raise reader.fail(f"invalid dimensions: {exc.errors()[0]['msg']}") from None

    try:
        components = []
        for m in range(M):
            U = reader.f64(d * p, f"U of component {m}").reshape(d, p)
            G = reader.f64(d * q, f"G of component {m}").reshape(d, q)
            b = reader.f64(d, f"b of component {m}")
            lam = reader.f64(d, f"Lambda of component {m}")
            components.append(ComponentParams(U=U, G=G, b=b, Lambda=lam))

        states = []
        for j in range(J):
            K = reader.u32(f"sub-state count of state {j}")
            if K < 1:
                raise reader.fail(f"state {j} has no sub-states")
            z_rows, c = [], []
            for k in range(K):
                z_rows.append(reader.f64(q, f"z of state {j} sub-state {k}"))
                c.append(reader.f64_scalar(f"c of state {j} sub-state {k}"))
            pi = reader.f64(M, f"pi of state {j}")
            try:
                states.append(StateModel(z=z_rows, c=c, pi=pi))
            except ModelInvariantError as exc:
                raise reader.fail(f"state {j}: {exc}") from None
        reader.finish()
        return TiedPldaModel(hyper=hyper, components=components, states=states, family=ModelFamily(family_code))
    except ModelInvariantError as exc:
        raise DataFormatError(f"{name}: {exc}") from None
