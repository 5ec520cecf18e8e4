"""Uniform DP pixelization: a grid-by-grid reference loop and the padded,
vectorised production path.

Both paths key the noise of grid ``(r, c)`` as ``(r, c, 0, 0)``, so on images
whose sides are multiples of ``b`` they agree bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import mechanism
from ._threads import run_bands
from .errors import InvalidParameterError
from .image import GridGeometry, as_gray, block_sums, crop, grid_dims, mirror_pad
from .mechanism import PrivacyParams


def quantize(x):
    """Round half away from zero; ``x`` is expected to be clipped to [0, 255]."""
    if np.isscalar(x):
        q = math.floor(x)
        return q + 1 if x - q >= 0.5 else q
    x = np.asarray(x, dtype=np.float64)
    q = np.floor(x)
    return (q + (x - q >= 0.5)).astype(np.uint8)


def release(mean, noise):
    """Noisy mean clipped to [0, 255] and quantized to 8 bits."""
    if np.isscalar(mean) and np.isscalar(noise):
        return quantize(min(max(mean + noise, 0.0), 255.0))
    return quantize(np.clip(np.asarray(mean) + noise, 0.0, 255.0))


@dataclass(eq=False)
class GridMeans:
    """Quantized noisy means of every ``b x b`` grid, shape ``(G_R, G_C)``."""

    geometry: GridGeometry
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.uint8)
        g = self.geometry
        if self.values.size != g.count:
            raise InvalidParameterError(f"expected {g.count} grid means, got {self.values.size}")
        self.values = self.values.reshape(g.rows, g.cols)

    def __eq__(self, other):
        if not isinstance(other, GridMeans):
            return NotImplemented
        return self.geometry == other.geometry and np.array_equal(self.values, other.values)


def _require_uniform(params: PrivacyParams) -> None:
    if params.n != 1:
        raise InvalidParameterError(f"uniform pixelization needs n == 1, got n={params.n}")


def pixelize_reference(img, params: PrivacyParams, seed: int, *, noise: bool = True) -> np.ndarray:
    """Sequential grid-by-grid pixelization without padding.

    Border grids smaller than ``b x b`` are averaged over the pixels they
    actually contain but receive the full-grid noise scale, exactly as the
    classic algorithm does.
    """
    img = as_gray(img)
    _require_uniform(params)
    M, N = img.shape
    b = params.b
    sigma = params.sigma
    out = np.zeros_like(img)
    for r, i in enumerate(range(0, M, b)):
        for c, j in enumerate(range(0, N, b)):
            h = min(b, M - i)
            w = min(b, N - j)
            block = img[i:i + h, j:j + w]
            mean = int(block.sum(dtype=np.int64)) / (h * w)
            eta = mechanism.laplace_at(seed, (r, c, 0, 0), sigma) if noise else 0.0
            out[i:i + h, j:j + w] = release(mean, eta)
    return out


def noisy_grid_means(
    padded: np.ndarray, geom: GridGeometry, params: PrivacyParams, seed: int,
    *, noise: bool = True, threads: int | None = None,
) -> np.ndarray:
    """Quantized noisy means of every grid of an already padded image."""
    b = geom.b
    out = np.empty((geom.rows, geom.cols), dtype=np.uint8)
    cols = np.arange(geom.cols)

    def band(r0, r1):
        means = block_sums(padded[r0 * b:r1 * b], b) / (b * b)
        eta = 0.0
        if noise:
            rows = np.arange(r0, r1)[:, None]
            eta = mechanism.laplace_grid(seed, params.sigma, rows, cols[None, :])
        out[r0:r1] = release(means, eta)

    run_bands(band, geom.rows, threads)
    return out


def pixelize_parallel(
    img, params: PrivacyParams, seed: int, *, noise: bool = True, threads: int | None = None,
) -> tuple[np.ndarray, GridMeans]:
    """Mirror-pad, average every grid at once, add keyed noise, broadcast back.

    Returns the pixelized image and the quantized means needed to rebuild it.
    """
    img = as_gray(img)
    _require_uniform(params)
    geom = grid_dims(*img.shape, params.b)
    padded = mirror_pad(img, geom)
    means = GridMeans(geom, noisy_grid_means(padded, geom, params, seed, noise=noise, threads=threads))
    return broadcast_means(means, *img.shape), means


def broadcast_means(means: GridMeans, height: int, width: int) -> np.ndarray:
    """Fill each ``b x b`` block with its mean and crop to ``height x width``."""
    g = means.geometry
    if (g.height, g.width) != (height, width):
        raise InvalidParameterError(
            f"means were computed for {g.height}x{g.width}, not {height}x{width}"
        )
    b = g.b
    full = np.empty(g.padded_shape, dtype=np.uint8)
    full.reshape(g.rows, b, g.cols, b)[...] = means.values[:, None, :, None]
    return crop(full, height, width)
