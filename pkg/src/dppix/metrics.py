"""Utility metrics (MSE, SSIM) and the CSV rows the benchmark tools emit."""

from __future__ import annotations

import csv
from dataclasses import asdict, dataclass, fields

import numpy as np

from .errors import InvalidParameterError

SSIM_WINDOW = 7
DYNAMIC_RANGE = 255
C1 = (0.01 * DYNAMIC_RANGE) ** 2
C2 = (0.03 * DYNAMIC_RANGE) ** 2


def _pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 2:
        raise InvalidParameterError(f"images must be 2-D with equal shapes, got {a.shape} and {b.shape}")
    return a, b


def mse(a, b) -> float:
    """Mean squared error, accumulated exactly in int64."""
    a, b = _pair(a, b)
    d = a.astype(np.int64) - b.astype(np.int64)
    return int(np.sum(d * d)) / d.size


def _window_sums(x: np.ndarray, w: int) -> np.ndarray:
    """Sum of every ``w x w`` window (valid positions) via a summed-area table."""
    sat = np.zeros((x.shape[0] + 1, x.shape[1] + 1), dtype=np.int64)
    np.cumsum(np.cumsum(x, axis=0, dtype=np.int64), axis=1, out=sat[1:, 1:])
    return sat[w:, w:] - sat[:-w, w:] - sat[w:, :-w] + sat[:-w, :-w]


def ssim_map(a, b, window: int = SSIM_WINDOW) -> np.ndarray:
    """Local SSIM over every valid ``window x window`` position (stride 1).

    Window statistics use 1/w**2 normalisation.  Sums of x, y, x**2, y**2
    and x*y are exact integers, so each variance is formed from an exact
    integer numerator before a single division.
    """
    a, b = _pair(a, b)
    if min(a.shape) < window:
        raise InvalidParameterError(f"images must be at least {window}x{window}, got {a.shape}")
    x = a.astype(np.int64)
    y = b.astype(np.int64)
    n = window * window
    sx, sy = _window_sums(x, window), _window_sums(y, window)
    sxx, syy, sxy = _window_sums(x * x, window), _window_sums(y * y, window), _window_sums(x * y, window)

    mu_x = sx / n
    mu_y = sy / n
    nn = float(n * n)
    var_x = (n * sxx - sx * sx) / nn
    var_y = (n * syy - sy * sy) / nn
    cov = (n * sxy - sx * sy) / nn

    num = (2 * mu_x * mu_y + C1) * (2 * cov + C2)
    den = (mu_x * mu_x + mu_y * mu_y + C1) * (var_x + var_y + C2)
    return num / den


def ssim(a, b, window: int = SSIM_WINDOW) -> float:
    """Mean structural similarity with a uniform ``window x window`` window."""
    return float(np.mean(ssim_map(a, b, window)))


@dataclass
class MetricReport:
    epsilon: float
    m: int
    b: int
    n: int
    seed: int
    mse: float
    ssim: float
    runtime_ms: float
    record_bytes: int


REPORT_FIELDS = [f.name for f in fields(MetricReport)]


def write_reports(path_or_file, reports, extra: list[str] = ()) -> None:
    """Write reports as CSV.

    ``reports`` holds :class:`MetricReport` objects or plain dicts; ``extra``
    names additional trailing columns (the sweep adds ``error``).
    """
    columns = REPORT_FIELDS + list(extra)

    def emit(fh):
        writer = csv.DictWriter(fh, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for rep in reports:
            row = asdict(rep) if isinstance(rep, MetricReport) else dict(rep)
            writer.writerow({k: row.get(k, "") for k in columns})

    if hasattr(path_or_file, "write"):
        emit(path_or_file)
    else:
        with open(path_or_file, "w", newline="") as fh:
            emit(fh)
