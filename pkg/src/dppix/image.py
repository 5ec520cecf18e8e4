"""Grayscale images, region masks and the b x b grid geometry over them.

Images are plain 2-D ``numpy.uint8`` arrays of shape ``(M, N)``; masks are
2-D ``uint8`` arrays holding only 0 (complex region) and 1 (simple region).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError


def as_gray(img) -> np.ndarray:
    """Validate ``img`` as an ``M x N`` 8-bit grayscale image and return it as uint8."""
    arr = np.asarray(img)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InvalidParameterError(f"expected a non-empty 2-D image, got shape {arr.shape}")
    if arr.dtype != np.uint8:
        if arr.size and (arr.min() < 0 or arr.max() > 255):
            raise InvalidParameterError("pixel intensities must lie in [0, 255]")
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise InvalidParameterError("pixel intensities must be integers")
        arr = arr.astype(np.uint8)
    return arr


def as_mask(mask, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Validate a binary region mask (1 = simple, 0 = complex)."""
    arr = np.asarray(mask)
    if arr.ndim != 2:
        raise InvalidParameterError(f"expected a 2-D mask, got shape {arr.shape}")
    if shape is not None and arr.shape != tuple(shape):
        raise InvalidParameterError(
            f"mask shape {arr.shape} does not match image shape {tuple(shape)}"
        )
    if arr.dtype == np.bool_:
        return arr.astype(np.uint8)
    if not np.isin(arr, (0, 1)).all():
        raise InvalidParameterError("mask values must be 0 or 1")
    return arr.astype(np.uint8)


@dataclass(frozen=True)
class GridGeometry:
    """Tiling of an ``height x width`` image by ``b x b`` grids.

    ``rows``/``cols`` are the grid counts (ceiling division) and
    ``pad_rows``/``pad_cols`` the number of mirrored rows/columns needed to
    make the padded image an exact multiple of ``b``.
    """

    height: int
    width: int
    b: int

    @property
    def rows(self) -> int:
        return -(-self.height // self.b)

    @property
    def cols(self) -> int:
        return -(-self.width // self.b)

    @property
    def pad_rows(self) -> int:
        return self.rows * self.b - self.height

    @property
    def pad_cols(self) -> int:
        return self.cols * self.b - self.width

    @property
    def count(self) -> int:
        return self.rows * self.cols

    @property
    def padded_shape(self) -> tuple[int, int]:
        return (self.rows * self.b, self.cols * self.b)


def grid_dims(height: int, width: int, b: int) -> GridGeometry:
    """Grid counts and padding for an ``height x width`` image with side ``b``.

    >>> g = grid_dims(10, 10, 3)
    >>> (g.rows, g.cols, g.pad_rows, g.pad_cols)
    (4, 4, 2, 2)
    """
    if int(b) != b or b < 1:
        raise InvalidParameterError(f"grid side must be a positive integer, got {b!r}")
    if height < 1 or width < 1:
        raise InvalidParameterError(f"image dimensions must be positive, got {height}x{width}")
    return GridGeometry(int(height), int(width), int(b))


def _check_geometry(arr: np.ndarray, geom: GridGeometry) -> None:
    if arr.shape != (geom.height, geom.width):
        raise InvalidParameterError(
            f"array shape {arr.shape} does not match geometry {geom.height}x{geom.width}"
        )


def mirror_pad(img: np.ndarray, geom: GridGeometry) -> np.ndarray:
    """Extend ``img`` to a multiple of ``b`` by edge-inclusive reflection.

    Appended row ``M + k`` copies row ``M - 1 - k`` and appended column
    ``N + k`` copies column ``N - 1 - k``; rows are padded before columns.
    Works for masks as well as images.
    """
    arr = np.asarray(img)
    _check_geometry(arr, geom)
    if geom.pad_rows >= geom.height or geom.pad_cols >= geom.width:
        raise InvalidParameterError(
            f"grid side {geom.b} needs {geom.pad_rows}x{geom.pad_cols} padding, "
            f"more than a single reflection of a {geom.height}x{geom.width} image"
        )
    if geom.pad_rows == 0 and geom.pad_cols == 0:
        return arr
    rows = np.concatenate([np.arange(geom.height), np.arange(geom.height - 1, geom.height - 1 - geom.pad_rows, -1)])
    cols = np.concatenate([np.arange(geom.width), np.arange(geom.width - 1, geom.width - 1 - geom.pad_cols, -1)])
    return arr[rows][:, cols]


def crop(img: np.ndarray, height: int, width: int) -> np.ndarray:
    return np.ascontiguousarray(img[:height, :width])


def grid_view(padded: np.ndarray, b: int) -> np.ndarray:
    """View a padded image as ``(G_R, b, G_C, b)`` without copying."""
    h, w = padded.shape
    if h % b or w % b:
        raise InvalidParameterError(f"padded shape {padded.shape} is not a multiple of {b}")
    return padded.reshape(h // b, b, w // b, b)


def block_sums(padded: np.ndarray, b: int) -> np.ndarray:
    """Exact int64 pixel sums of every ``b x b`` block of a padded array."""
    view = grid_view(padded, b)
    return view.sum(axis=3, dtype=np.int64).sum(axis=1)


def grid_mean(padded: np.ndarray, geom: GridGeometry, r: int, c: int) -> float:
    """Mean intensity of grid ``(r, c)`` of an already padded image."""
    if padded.shape != geom.padded_shape:
        raise InvalidParameterError(f"expected a padded {geom.padded_shape} image, got {padded.shape}")
    if not (0 <= r < geom.rows and 0 <= c < geom.cols):
        raise InvalidParameterError(f"grid index ({r}, {c}) outside {geom.rows}x{geom.cols}")
    b = geom.b
    total = int(padded[r * b:(r + 1) * b, c * b:(c + 1) * b].sum(dtype=np.int64))
    return total / (b * b)


def mask_grid_mean(mask: np.ndarray, geom: GridGeometry, r: int, c: int) -> float:
    """Fraction of simple-region pixels in grid ``(r, c)``; the mask is mirror padded first."""
    padded = mirror_pad(as_mask(mask), geom)
    return grid_mean(padded, geom, r, c)
