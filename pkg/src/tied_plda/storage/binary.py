"""Little-endian primitives shared by the binary file formats."""

import struct
from pathlib import Path
from typing import BinaryIO, Iterable, Union

import numpy as np

from ..errors import DataFormatError

PathOrFile = Union[str, Path, BinaryIO]

_U32 = struct.Struct("<I")
_U64 = struct.Struct("<Q")
_F64 = np.dtype("<f8")


def load_bytes(source: PathOrFile) -> tuple[bytes, str]:
    """Read a whole file. Returns the payload and a name for error messages."""
    if isinstance(source, (str, Path)):
        path = Path(source)
        try:
            return path.read_bytes(), str(path)
        except FileNotFoundError:
            raise DataFormatError(f"{path}: file not found") from None
    return source.read(), getattr(source, "name", "<stream>")


def store_bytes(destination: PathOrFile, chunks: Iterable[bytes]) -> None:
    payload = b"".join(chunks)
    if isinstance(destination, (str, Path)):
        Path(destination).write_bytes(payload)
    else:
        destination.write(payload)


class BinaryReader:
    """Sequential reader over an in-memory payload with format-aware errors."""

    def __init__(self, payload: bytes, source: str):
        self.payload = payload
        self.source = source
        self.offset = 0

    def fail(self, message: str) -> DataFormatError:
        return DataFormatError(f"{self.source}: {message}")

    def _take(self, size: int, what: str) -> bytes:
        end = self.offset + size
        if end > len(self.payload):
            raise self.fail(
                f"truncated while reading {what} (need {size} bytes at offset {self.offset}, "
                f"{len(self.payload) - self.offset} left)"
            )
        chunk = self.payload[self.offset:end]
        self.offset = end
        return chunk

    def magic(self, expected: bytes) -> None:
        found = self._take(len(expected), "magic")
        if found != expected:
            raise self.fail(f"bad magic {found!r}, expected {expected!r}")

    def u32(self, what: str) -> int:
        return _U32.unpack(self._take(_U32.size, what))[0]

    def u64(self, what: str) -> int:
        return _U64.unpack(self._take(_U64.size, what))[0]

    def f64(self, count: int, what: str) -> np.ndarray:
        chunk = self._take(count * _F64.itemsize, what)
        return np.frombuffer(chunk, dtype=_F64).astype(np.float64)

    def f64_scalar(self, what: str) -> float:
        return float(self.f64(1, what)[0])

    def remaining(self) -> int:
        return len(self.payload) - self.offset

    def finish(self) -> None:
        if self.remaining():
            raise self.fail(f"{self.remaining()} unexpected trailing bytes")


def u32(value: int) -> bytes:
    return _U32.pack(int(value))


def u64(value: int) -> bytes:
    return _U64.pack(int(value))


def f64(values) -> bytes:
    return np.ascontiguousarray(values, dtype=_F64).tobytes()
