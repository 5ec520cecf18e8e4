"""Binary PGM (P5, maxval 255) reading and writing.

PNG goes through Pillow when it is installed; nothing in the pipeline
depends on it.
"""

from __future__ import annotations

import os
import re

import numpy as np

from .errors import InvalidParameterError

_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\S+)")


def decode_pgm(data: bytes) -> np.ndarray:
    pos = 0
    fields = []
    for _ in range(4):
        m = _TOKEN.match(data, pos)
        if m is None:
            raise InvalidParameterError("truncated PGM header")
        fields.append(m.group(1))
        pos = m.end()
    magic, width, height, maxval = fields
    if magic != b"P5":
        raise InvalidParameterError(f"only binary PGM (P5) is supported, got {magic!r}")
    width, height, maxval = int(width), int(height), int(maxval)
    if maxval != 255:
        raise InvalidParameterError(f"only maxval 255 is supported, got {maxval}")
    # exactly one whitespace byte separates the header from the raster
    pos += 1
    raster = data[pos:pos + width * height]
    if len(raster) != width * height:
        raise InvalidParameterError("truncated PGM raster")
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width).copy()


def encode_pgm(img: np.ndarray) -> bytes:
    arr = np.asarray(img, dtype=np.uint8)
    if arr.ndim != 2:
        raise InvalidParameterError("PGM holds a single 2-D channel")
    h, w = arr.shape
    return b"P5\n%d %d\n255\n" % (w, h) + np.ascontiguousarray(arr).tobytes()


def read_image(path) -> np.ndarray:
    """Load a grayscale image; ``.pgm`` natively, anything else via Pillow."""
    path = os.fspath(path)
    if path.lower().endswith((".pgm", ".pnm")):
        with open(path, "rb") as fh:
            return decode_pgm(fh.read())
    from PIL import Image

    with Image.open(path) as im:
        return np.asarray(im.convert("L"), dtype=np.uint8).copy()


def write_image(path, img: np.ndarray) -> None:
    path = os.fspath(path)
    if path.lower().endswith((".pgm", ".pnm")):
        with open(path, "wb") as fh:
            fh.write(encode_pgm(img))
        return
    from PIL import Image

    Image.fromarray(np.asarray(img, dtype=np.uint8)).save(path)


def read_mask(path) -> np.ndarray:
    """Load a region mask: pixels >= 128 are simple (1), the rest complex (0)."""
    return (read_image(path) >= 128).astype(np.uint8)
