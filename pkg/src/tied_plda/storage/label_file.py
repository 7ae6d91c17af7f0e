"""PLDALBL1 label files.

Version 1 stores hard labels: u64 frame count, then one u32 state index per
frame. Version 2 stores soft labels: u64 frame count, then per frame a u32
entry count followed by that many (u32 state, f64 mass) pairs.
"""

import numpy as np

from ..data.labels import LabelSequence
from ..errors import DataFormatError
from .binary import BinaryReader, PathOrFile, f64, load_bytes, store_bytes, u32, u64

LABEL_MAGIC = b"PLDALBL1"
HARD_LABELS = 1
SOFT_LABELS = 2


def write_labels(labels: LabelSequence, destination: PathOrFile) -> None:
    """Write hard labels as version 1 and soft labels as version 2."""
    if labels.is_hard:
        chunks = [LABEL_MAGIC, u32(HARD_LABELS), u64(labels.num_frames)]
        chunks.append(np.ascontiguousarray(labels.states, dtype="<u4").tobytes())
    else:
        chunks = [LABEL_MAGIC, u32(SOFT_LABELS), u64(labels.num_frames)]
        for entries in labels.entries():
            chunks.append(u32(len(entries)))
            for state, mass in entries:
                chunks.append(u32(state))
                chunks.append(f64([mass]))
    store_bytes(destination, chunks)


def read_labels(source: PathOrFile) -> LabelSequence:
    payload, name = load_bytes(source)
    reader = BinaryReader(payload, name)
    reader.magic(LABEL_MAGIC)
    version = reader.u32("version")
    if version not in (HARD_LABELS, SOFT_LABELS):
        raise reader.fail(f"unsupported label version {version}")
    count = reader.u64("frame count")

    try:
        if version == HARD_LABELS:
            if reader.remaining() != 4 * count:
                raise reader.fail(f"header declares {count} labels but the payload has {reader.remaining()} bytes")
            states = np.frombuffer(payload, dtype="<u4", count=count, offset=reader.offset)
            reader.offset += 4 * count
            labels = LabelSequence.from_hard(states.astype(np.int64))
        else:
            posteriors = []
            for t in range(count):
                entries = []
                for _ in range(reader.u32(f"entry count of frame {t}")):
                    state = reader.u32(f"state index of frame {t}")
                    entries.append((state, reader.f64_scalar(f"mass of frame {t}")))
                posteriors.append(entries)
            labels = LabelSequence.from_soft(posteriors)
    except DataFormatError as exc:
        if str(exc).startswith(name):
            raise
        raise reader.fail(str(exc)) from None
    reader.finish()
    return labels
