"""Region-adaptive DP pixelization with subgrid refinement.

Grids whose mask mean exceeds 0.5 are simple: they get one noisy mean,
keyed ``(r, c, 0, 0)``.  Every other grid is complex and is split into
``n x n`` subgrids of side ``b // n``; subgrid ``(sr, sc)`` is keyed
``(r, c, sr, sc)`` and receives noise ``n**2`` times larger, which keeps the
privacy budget identical across the two region types.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import mechanism
from ._threads import run_bands
from .errors import CorruptRecordError, InvalidParameterError
from .image import GridGeometry, as_gray, as_mask, block_sums, crop, grid_dims, mirror_pad
from .mechanism import PrivacyParams
from .uniform import release

SIMPLE_THRESHOLD = 0.5


@dataclass(eq=False)
class RegionClassification:
    geometry: GridGeometry
    mask_means: np.ndarray  # float32, (G_R, G_C)

    def __post_init__(self):
        g = self.geometry
        self.mask_means = np.asarray(self.mask_means, dtype=np.float32).reshape(g.rows, g.cols)

    @property
    def is_simple(self) -> np.ndarray:
        # strict: a grid that is exactly half simple counts as complex
        return self.mask_means > np.float32(SIMPLE_THRESHOLD)

    def __eq__(self, other):
        if not isinstance(other, RegionClassification):
            return NotImplemented
        return self.geometry == other.geometry and np.array_equal(self.mask_means, other.mask_means)


def classify_regions(mask, geom: GridGeometry) -> RegionClassification:
    """Per-grid fraction of simple pixels on the mirror-padded mask."""
    mask = as_mask(mask, (geom.height, geom.width))
    padded = mirror_pad(mask, geom)
    # counts are exact; the division rounds once to float64, then to float32
    means = block_sums(padded, geom.b) / (geom.b * geom.b)
    return RegionClassification(geom, means.astype(np.float32))


@dataclass(eq=False)
class AdaptiveMeans:
    """Everything needed to rebuild an adaptively pixelized image.

    ``simple_means`` lists simple grids in row-major order; ``complex_submeans``
    lists, for each complex grid in row-major order, its ``n * n`` subgrid
    means in row-major order.
    """

    geometry: GridGeometry
    n: int
    classification: RegionClassification
    simple_means: np.ndarray
    complex_submeans: np.ndarray

    def __post_init__(self):
        self.simple_means = np.asarray(self.simple_means, dtype=np.uint8).ravel()
        self.complex_submeans = np.asarray(self.complex_submeans, dtype=np.uint8).ravel()

    @property
    def sub_side(self) -> int:
        return self.geometry.b // self.n

    def check(self) -> None:
        """Raise :class:`CorruptRecordError` if the payload lengths disagree."""
        g = self.geometry
        if self.n < 1 or g.b % self.n:
            raise CorruptRecordError(f"subgrid factor {self.n} does not divide grid side {g.b}")
        if self.classification.geometry != g:
            raise CorruptRecordError("classification geometry differs from means geometry")
        n_simple = int(self.classification.is_simple.sum())
        n_complex = g.count - n_simple
        if self.simple_means.size != n_simple:
            raise CorruptRecordError(f"{n_simple} simple grids but {self.simple_means.size} simple means")
        if self.complex_submeans.size != n_complex * self.n * self.n:
            raise CorruptRecordError(
                f"{n_complex} complex grids need {n_complex * self.n ** 2} submeans, "
                f"got {self.complex_submeans.size}"
            )

    def __eq__(self, other):
        if not isinstance(other, AdaptiveMeans):
            return NotImplemented
        return (
            self.geometry == other.geometry
            and self.n == other.n
            and self.classification == other.classification
            and np.array_equal(self.simple_means, other.simple_means)
            and np.array_equal(self.complex_submeans, other.complex_submeans)
        )


def _subgrid_sums(padded_band: np.ndarray, b: int, n: int) -> np.ndarray:
    """int64 sums shaped ``(rows, cols, n, n)`` for a band of whole grid rows."""
    s = b // n
    h, w = padded_band.shape
    view = padded_band.reshape(h // b, n, s, w // b, n, s)
    sums = view.sum(axis=5, dtype=np.int64).sum(axis=2)
    return sums.transpose(0, 2, 1, 3)


def pixelize_adaptive(
    img, mask, params: PrivacyParams, seed: int, *, noise: bool = True, threads: int | None = None,
) -> tuple[np.ndarray, AdaptiveMeans]:
    """Pixelize simple regions with ``b x b`` grids and complex ones with subgrids.

    Returns the pixelized image and the :class:`AdaptiveMeans` that rebuild it.
    """
    img = as_gray(img)
    geom = grid_dims(*img.shape, params.b)
    cls = classify_regions(mask, geom)
    simple = cls.is_simple
    padded = mirror_pad(img, geom)
    b, n, s = params.b, params.n, params.sub_side

    grid_q = np.zeros((geom.rows, geom.cols), dtype=np.uint8)
    sub_q = np.zeros((geom.rows, geom.cols, n, n), dtype=np.uint8)
    sub_idx = np.arange(n)

    def band(r0, r1):
        chunk = padded[r0 * b:r1 * b]
        rows = np.arange(r0, r1)
        band_simple = simple[r0:r1]

        rr, cc = np.nonzero(band_simple)
        if rr.size:
            means = block_sums(chunk, b)[rr, cc] / (b * b)
            eta = mechanism.laplace_grid(seed, params.sigma, rows[rr], cc) if noise else 0.0
            grid_q[r0 + rr, cc] = release(means, eta)

        rr, cc = np.nonzero(~band_simple)
        if rr.size:
            means = _subgrid_sums(chunk, b, n)[rr, cc] / (s * s)
            eta = 0.0
            if noise:
                eta = mechanism.laplace_grid(
                    seed, params.sub_sigma,
                    rows[rr][:, None, None], cc[:, None, None],
                    sub_idx[None, :, None], sub_idx[None, None, :],
                )
            sub_q[r0 + rr, cc] = release(means, eta)

    run_bands(band, geom.rows, threads)

    result = AdaptiveMeans(geom, n, cls, grid_q[simple], sub_q[~simple])
    return reassemble(result, *img.shape), result


def reassemble(means: AdaptiveMeans, height: int, width: int) -> np.ndarray:
    """Broadcast simple means over ``b x b`` grids and submeans over subgrids."""
    means.check()
    g = means.geometry
    if (g.height, g.width) != (height, width):
        raise InvalidParameterError(f"means were computed for {g.height}x{g.width}, not {height}x{width}")
    b, n = g.b, means.n
    s = b // n
    simple = means.classification.is_simple

    # every grid is expressed as n x n submeans; simple grids repeat one value
    subs = np.empty((g.rows, g.cols, n, n), dtype=np.uint8)
    subs[simple] = means.simple_means[:, None, None]
    subs[~simple] = means.complex_submeans.reshape(-1, n, n)

    full = np.empty(g.padded_shape, dtype=np.uint8)
    full.reshape(g.rows, n, s, g.cols, n, s)[...] = subs.transpose(0, 2, 1, 3)[:, :, None, :, :, None]
    return crop(full, height, width)
