"""The ``.dppx`` container: noisy grid statistics sufficient to rebuild a
pixelized image, and nothing else.

Layout (all little-endian)::

    magic "DPPX" | version u16 | mode u8 | reserved u8 | M u32 | N u32 | b u16 | n u16
    uniform:  G_R*G_C noisy means, one byte each
    adaptive: G_R*G_C float32 mask means | u32 simple count |
              simple means (bytes) | complex submeans (bytes)
    CRC32 (IEEE) of everything above, u32

The privacy budget, ``m`` and the seed are deliberately not stored; a seed
in particular would let anyone strip the noise.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass
from typing import Union

import numpy as np

from .adaptive import AdaptiveMeans, RegionClassification, reassemble
from .errors import (
    ChecksumError,
    CorruptRecordError,
    InvalidParameterError,
    NotARecordError,
    UnsupportedVersionError,
)
from .image import GridGeometry
from .uniform import GridMeans, broadcast_means

MAGIC = b"DPPX"
VERSION = 1
MODE_UNIFORM = 1
MODE_ADAPTIVE = 2

_HEADER = struct.Struct("<4sHBBIIHH")
_CRC = struct.Struct("<I")
_COUNT = struct.Struct("<I")
HEADER_SIZE = _HEADER.size  # 20
OVERHEAD = HEADER_SIZE + _CRC.size  # 24


@dataclass(eq=False)
class PixelRecord:
    mode: int
    height: int
    width: int
    b: int
    n: int
    payload: Union[GridMeans, AdaptiveMeans]

    @classmethod
    def from_means(cls, means: Union[GridMeans, AdaptiveMeans]) -> "PixelRecord":
        g = means.geometry
        if isinstance(means, AdaptiveMeans):
            return cls(MODE_ADAPTIVE, g.height, g.width, g.b, means.n, means)
        return cls(MODE_UNIFORM, g.height, g.width, g.b, 1, means)

    def __eq__(self, other):
        if not isinstance(other, PixelRecord):
            return NotImplemented
        return (
            (self.mode, self.height, self.width, self.b, self.n)
            == (other.mode, other.height, other.width, other.b, other.n)
            and self.payload == other.payload
        )


def encoded_size(height: int, width: int, b: int, n: int = 1, simple: int | None = None) -> int:
    """Byte size of a record; ``simple=None`` means a uniform record."""
    grids = (-(-height // b)) * (-(-width // b))
    if simple is None:
        return OVERHEAD + grids
    return OVERHEAD + 4 * grids + _COUNT.size + simple + (grids - simple) * n * n


def encode(record: PixelRecord) -> bytes:
    if not (0 < record.height < 2**32 and 0 < record.width < 2**32):
        raise InvalidParameterError("image dimensions must fit in u32")
    if not (0 < record.b < 2**16 and 0 < record.n < 2**16):
        raise InvalidParameterError("grid side and subgrid factor must fit in u16")
    parts = [_HEADER.pack(MAGIC, VERSION, record.mode, 0, record.height, record.width, record.b, record.n)]
    p = record.payload
    if record.mode == MODE_UNIFORM:
        if record.n != 1:
            raise InvalidParameterError("uniform records must have n == 1")
        parts.append(p.values.tobytes())
    elif record.mode == MODE_ADAPTIVE:
        p.check()
        parts.append(p.classification.mask_means.astype("<f4").tobytes())
        parts.append(_COUNT.pack(p.simple_means.size))
        parts.append(p.simple_means.tobytes())
        parts.append(p.complex_submeans.tobytes())
    else:
        raise InvalidParameterError(f"unknown record mode {record.mode}")
    body = b"".join(parts)
    return body + _CRC.pack(zlib.crc32(body))


def decode(data: bytes) -> PixelRecord:
    data = bytes(data)
    if len(data) >= 4 and data[:4] != MAGIC:
        raise NotARecordError("missing DPPX magic")
    if len(data) < OVERHEAD:
        raise CorruptRecordError(f"record too short ({len(data)} bytes)")
    _, version, mode, _, M, N, b, n = _HEADER.unpack_from(data)
    if version > VERSION:
        raise UnsupportedVersionError(f"format version {version} is newer than {VERSION}")
    body, (crc,) = data[:-4], _CRC.unpack_from(data, len(data) - 4)
    if zlib.crc32(body) != crc:
        raise ChecksumError("CRC32 mismatch")
    if M == 0 or N == 0 or b == 0 or n == 0:
        raise CorruptRecordError("zero dimension in header")
    geom = GridGeometry(M, N, b)
    payload = body[HEADER_SIZE:]

    if mode == MODE_UNIFORM:
        if n != 1:
            raise CorruptRecordError("uniform record with n != 1")
        if len(payload) != geom.count:
            raise CorruptRecordError(f"expected {geom.count} means, found {len(payload)} bytes")
        means = GridMeans(geom, np.frombuffer(payload, dtype=np.uint8).copy())
        return PixelRecord(mode, M, N, b, 1, means)

    if mode == MODE_ADAPTIVE:
        if b % n:
            raise CorruptRecordError(f"subgrid factor {n} does not divide grid side {b}")
        head = 4 * geom.count + _COUNT.size
        if len(payload) < head:
            raise CorruptRecordError("adaptive payload shorter than its mask means")
        mask_means = np.frombuffer(payload, dtype="<f4", count=geom.count).astype(np.float32)
        (n_simple,) = _COUNT.unpack_from(payload, 4 * geom.count)
        if n_simple > geom.count:
            raise CorruptRecordError("simple grid count exceeds grid count")
        n_sub = (geom.count - n_simple) * n * n
        if len(payload) != head + n_simple + n_sub:
            raise CorruptRecordError("adaptive payload length does not match its counts")
        rest = np.frombuffer(payload, dtype=np.uint8, offset=head)
        means = AdaptiveMeans(
            geom, n, RegionClassification(geom, mask_means),
            rest[:n_simple].copy(), rest[n_simple:].copy(),
        )
        # the stored count must agree with the threshold applied to the mask means
        means.check()
        return PixelRecord(mode, M, N, b, n, means)

    raise CorruptRecordError(f"unknown record mode {mode}")


def reconstruct(record: PixelRecord) -> np.ndarray:
    """Rebuild the full pixelized image from a record."""
    if record.mode == MODE_UNIFORM:
        return broadcast_means(record.payload, record.height, record.width)
    if record.mode == MODE_ADAPTIVE:
        return reassemble(record.payload, record.height, record.width)
    raise CorruptRecordError(f"unknown record mode {record.mode}")


def save(path, record: PixelRecord) -> int:
    data = encode(record)
    with open(path, "wb") as fh:
        fh.write(data)
    return len(data)


def load(path) -> PixelRecord:
    with open(path, "rb") as fh:
        return decode(fh.read())
