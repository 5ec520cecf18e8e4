"""Differentially private image pixelization.

Uniform pixelization (a sequential reference and a vectorised, multi-threaded
path), region-adaptive pixelization with subgrid refinement, keyed Laplace
noise, the compact ``.dppx`` record format, and MSE/SSIM utility metrics.
"""

from .adaptive import AdaptiveMeans, RegionClassification, classify_regions, pixelize_adaptive, reassemble
from .errors import (
    ChecksumError,
    ConsistencyError,
    CorruptRecordError,
    DppxError,
    InvalidParameterError,
    NotARecordError,
    RecordError,
    UnsupportedVersionError,
)
from .image import GridGeometry, grid_dims, grid_mean, mask_grid_mean, mirror_pad
from .mechanism import PrivacyParams, laplace_at, laplace_grid, noise_scale, sensitivity, subgrid_sensitivity
from .metrics import MetricReport, mse, ssim
from .pgm import read_image, read_mask, write_image
from .record import PixelRecord, decode, encode, reconstruct
from .uniform import GridMeans, broadcast_means, pixelize_parallel, pixelize_reference

__version__ = "0.1.0"

__all__ = [
    "AdaptiveMeans",
    "ChecksumError",
    "ConsistencyError",
    "CorruptRecordError",
    "DppxError",
    "GridGeometry",
    "GridMeans",
    "InvalidParameterError",
    "MetricReport",
    "NotARecordError",
    "PixelRecord",
    "PrivacyParams",
    "RecordError",
    "RegionClassification",
    "UnsupportedVersionError",
    "broadcast_means",
    "classify_regions",
    "decode",
    "encode",
    "grid_dims",
    "grid_mean",
    "laplace_at",
    "laplace_grid",
    "mask_grid_mean",
    "mirror_pad",
    "mse",
    "noise_scale",
    "pixelize_adaptive",
    "pixelize_parallel",
    "pixelize_reference",
    "read_image",
    "read_mask",
    "reassemble",
    "reconstruct",
    "sensitivity",
    "ssim",
    "subgrid_sensitivity",
    "write_image",
]
