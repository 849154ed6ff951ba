"""Binary array container.

Layout (all little-endian):
    magic   8 bytes  b"STRIDEv1"
    ndim    uint32
    dims    ndim x uint64
    dtype   uint8    0 = complex64 (interleaved float32), 1 = complex128
    payload row-major interleaved real/imag
"""

import logging
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from emiclean.core.errors import (
    BadMagicError,
    DimensionOverflowError,
    NonFiniteError,
    TruncatedPayloadError,
    UnsupportedDtypeError,
)

logger = logging.getLogger(__name__)

MAGIC = b"STRIDEv1"
DTYPE_COMPLEX64 = 0
DTYPE_COMPLEX128 = 1

_DTYPES = {
    DTYPE_COMPLEX64: np.dtype("<c8"),
    DTYPE_COMPLEX128: np.dtype("<c16"),
}

# Largest payload we are willing to address, in bytes
_MAX_PAYLOAD_BYTES = 2**62
_MAX_NDIM = 32


@dataclass(frozen=True)
class ContainerHeader:
    dims: tuple[int, ...]
    dtype_code: int = DTYPE_COMPLEX128

    @property
    def ndim(self) -> int:
        return len(self.dims)

    @property
    def dtype(self) -> np.dtype:
        dtype = _DTYPES.get(self.dtype_code)
        if dtype is None:
            raise UnsupportedDtypeError(f"unknown dtype code {self.dtype_code}")
        return dtype

    @property
    def payload_bytes(self) -> int:
        # Python ints do not overflow, so this can be checked against the addressable limit directly
        n_bytes = self.dtype.itemsize
        for dim in self.dims:
            n_bytes *= dim
        return n_bytes

    def pack(self) -> bytes:
        return (
            MAGIC
            + struct.pack("<I", self.ndim)
            + struct.pack(f"<{self.ndim}Q", *self.dims)
            + struct.pack("<B", self.dtype_code)
        )

    @classmethod
    def unpack(cls, raw: bytes, source: str | Path = "<bytes>") -> tuple["ContainerHeader", int]:
        """Parse the header at the start of ``raw``. Returns (header, payload offset)."""
        if raw[: len(MAGIC)] != MAGIC:
            raise BadMagicError(f"{source}: bad magic {raw[: len(MAGIC)]!r}")
        offset = len(MAGIC)

        if len(raw) < offset + 4:
            raise TruncatedPayloadError(f"{source}: header truncated before ndim")
        (ndim,) = struct.unpack_from("<I", raw, offset)
        offset += 4
        if ndim > _MAX_NDIM:
            raise DimensionOverflowError(f"{source}: ndim {ndim} exceeds {_MAX_NDIM}")

        if len(raw) < offset + 8 * ndim + 1:
            raise TruncatedPayloadError(f"{source}: header truncated inside dims")
        dims = struct.unpack_from(f"<{ndim}Q", raw, offset)
        offset += 8 * ndim
        (dtype_code,) = struct.unpack_from("<B", raw, offset)
        offset += 1

        if dtype_code not in _DTYPES:
            raise UnsupportedDtypeError(f"{source}: unknown dtype code {dtype_code}")
        header = cls(dims=tuple(dims), dtype_code=dtype_code)
        if header.payload_bytes > _MAX_PAYLOAD_BYTES:
            raise DimensionOverflowError(f"{source}: dims {header.dims} describe {header.payload_bytes} bytes")
        return header, offset


def save_array(path: str | Path, arr: np.ndarray, dtype_code: int = DTYPE_COMPLEX128) -> Path:
    """Write ``arr`` as a container file. Returns the path written."""
    if dtype_code not in _DTYPES:
        raise UnsupportedDtypeError(f"unknown dtype code {dtype_code}")
    arr = np.asarray(arr)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"refusing to save non-finite data to {path}")

    payload = np.ascontiguousarray(arr, dtype=_DTYPES[dtype_code])
    header = ContainerHeader(dims=payload.shape, dtype_code=dtype_code)

    path = Path(path)
    with path.open("wb") as fh:
        fh.write(header.pack())
        fh.write(payload.tobytes(order="C"))
    return path


def load_array(path: str | Path) -> np.ndarray:
    """Read a container file into a complex128 array.

    Raises BadMagicError, DimensionOverflowError, UnsupportedDtypeError or
    TruncatedPayloadError depending on what is wrong with the file.
    """
    raw = Path(path).read_bytes()
    header, offset = ContainerHeader.unpack(raw, path)

    n_bytes = header.payload_bytes
    if len(raw) - offset < n_bytes:
        raise TruncatedPayloadError(f"{path}: payload has {len(raw) - offset} bytes, header promises {n_bytes}")

    dtype = header.dtype
    arr = np.frombuffer(raw, dtype=dtype, count=n_bytes // dtype.itemsize, offset=offset).reshape(header.dims)
    return arr.astype(np.complex128)
