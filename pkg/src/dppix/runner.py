"""Batch runs behind the command line: single images, parameter sweeps and
timing benchmarks."""

from __future__ import annotations

import itertools
import logging
import os
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import record as rec
from ._threads import resolve_threads
from .adaptive import pixelize_adaptive
from .errors import ConsistencyError, InvalidParameterError
from .mechanism import PrivacyParams
from .metrics import MetricReport, mse, ssim, SSIM_WINDOW
from .pgm import read_image, read_mask, write_image
from .uniform import pixelize_parallel, pixelize_reference

log = logging.getLogger(__name__)

MODES = ("uniform", "adaptive", "reference")
IMAGE_SUFFIXES = (".pgm", ".pnm", ".png")


@dataclass
class RunConfig:
    inputs: list = field(default_factory=list)
    out_dir: str | None = None
    mode: str = "uniform"
    epsilon: float = 0.5
    m: int = 16
    b: int = 16
    n: int = 1
    seed: int = 0
    mask: str | None = None
    emit_image: bool = True
    emit_record: bool = True
    check: bool = True
    threads: int = 0
    noise: bool = True
    # sweep lists; empty means "use the scalar above"
    epsilons: list = field(default_factory=list)
    ms: list = field(default_factory=list)
    bs: list = field(default_factory=list)
    ns: list = field(default_factory=list)
    seeds: list = field(default_factory=list)
    # bench
    repeat: int = 10
    warmup: int = 1

    def params(self) -> PrivacyParams:
        n = self.n if self.mode == "adaptive" else 1
        return PrivacyParams(self.epsilon, self.m, self.b, n)

    def validate(self) -> None:
        if self.mode not in MODES:
            raise InvalidParameterError(f"unknown mode {self.mode!r}")
        if self.mode == "adaptive" and not self.mask:
            raise InvalidParameterError("adaptive mode needs a mask")
        if self.mode == "reference" and self.emit_record:
            raise InvalidParameterError("the reference path does not produce a record")
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidParameterError("seed must be a 64-bit unsigned integer")
        self.params()


def pixelize(img, cfg: RunConfig, mask=None, threads=None):
    """Run the configured pixelizer; returns ``(image, record_or_None)``."""
    params = cfg.params()
    if cfg.mode == "reference":
        return pixelize_reference(img, params, cfg.seed, noise=cfg.noise), None
    if cfg.mode == "adaptive":
        out, means = pixelize_adaptive(img, mask, params, cfg.seed, noise=cfg.noise, threads=threads)
    else:
        out, means = pixelize_parallel(img, params, cfg.seed, noise=cfg.noise, threads=threads)
    return out, rec.PixelRecord.from_means(means)


def _safe_ssim(a, b) -> float:
    return ssim(a, b) if min(a.shape) >= SSIM_WINDOW else float("nan")


def run_image(img, cfg: RunConfig, mask=None, stem: str | None = None, threads=None) -> MetricReport:
    """Pixelize one in-memory image, write requested outputs, return metrics."""
    t0 = time.perf_counter()
    out, record = pixelize(img, cfg, mask, threads)
    runtime_ms = (time.perf_counter() - t0) * 1e3

    data = rec.encode(record) if record is not None else b""
    if record is not None and cfg.check:
        again = rec.reconstruct(rec.decode(data))
        if not np.array_equal(again, out):
            raise ConsistencyError(f"{stem or 'image'}: reconstruction differs from emitted image")

    if cfg.out_dir and stem:
        os.makedirs(cfg.out_dir, exist_ok=True)
        if cfg.emit_image:
            write_image(os.path.join(cfg.out_dir, stem + ".pgm"), out)
        if cfg.emit_record and record is not None:
            with open(os.path.join(cfg.out_dir, stem + ".dppx"), "wb") as fh:
                fh.write(data)

    params = cfg.params()
    return MetricReport(
        epsilon=params.epsilon, m=params.m, b=params.b, n=params.n, seed=cfg.seed,
        mse=mse(img, out), ssim=_safe_ssim(img, out),
        runtime_ms=runtime_ms, record_bytes=len(data),
    )


def expand_inputs(paths) -> list[Path]:
    files = []
    for p in map(Path, paths):
        if p.is_dir():
            files.extend(sorted(q for q in p.iterdir() if q.suffix.lower() in IMAGE_SUFFIXES))
        else:
            files.append(p)
    return files


def mask_for(image_path: Path, mask_source: str) -> Path:
    """Directory masks pair with images by identical file stem."""
    src = Path(mask_source)
    if not src.is_dir():
        return src
    for suffix in IMAGE_SUFFIXES:
        cand = src / (image_path.stem + suffix)
        if cand.exists():
            return cand
    raise FileNotFoundError(f"no mask named {image_path.stem}.* in {src}")


def _load(path: Path, cfg: RunConfig):
    img = read_image(path)
    mask = None
    if cfg.mode == "adaptive":
        mask = read_mask(mask_for(path, cfg.mask))
        if mask.shape != img.shape:
            raise InvalidParameterError(f"mask shape {mask.shape} differs from image shape {img.shape}")
    return img, mask


def run_single(cfg: RunConfig) -> MetricReport:
    """Process the single input image named by ``cfg.inputs[0]``."""
    cfg.validate()
    path = Path(cfg.inputs[0])
    img, mask = _load(path, cfg)
    return run_image(img, cfg, mask, stem=path.stem, threads=cfg.threads)


def run_batch(cfg: RunConfig) -> list[tuple[Path, MetricReport | Exception]]:
    """Process every input file; failures are returned per file, not raised.

    Files are spread over threads, each pixelized single-threaded, so the
    outputs are identical to a sequential run.
    """
    cfg.validate()
    files = expand_inputs(cfg.inputs)

    def one(path):
        try:
            img, mask = _load(path, cfg)
            return path, run_image(img, cfg, mask, stem=path.stem, threads=1 if len(files) > 1 else cfg.threads)
        except Exception as exc:  # reported per file
            return path, exc

    workers = min(resolve_threads(cfg.threads), max(1, len(files)))
    if workers <= 1:
        return [one(p) for p in files]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, files))


def sweep_grid(cfg: RunConfig) -> list[RunConfig]:
    """Cartesian product of the sweep lists, ordered by (epsilon, m, b, n, seed)."""
    eps = sorted(cfg.epsilons or [cfg.epsilon])
    ms = sorted(cfg.ms or [cfg.m])
    bs = sorted(cfg.bs or [cfg.b])
    ns = sorted(cfg.ns or [cfg.n])
    seeds = sorted(cfg.seeds or [cfg.seed])
    for name, values in (("epsilon", eps), ("m", ms), ("b", bs), ("n", ns), ("seed", seeds)):
        if not values:
            raise InvalidParameterError(f"empty sweep list for {name}")
    return [
        replace(cfg, epsilon=e, m=m, b=b, n=n, seed=s, out_dir=None, emit_image=False, emit_record=False)
        for e, m, b, n, s in itertools.product(eps, ms, bs, ns, seeds)
    ]


def run_sweep(cfg: RunConfig) -> list[dict]:
    """One row per (parameters, seed) on the first input image.

    Failed runs keep their parameters and carry the message in ``error``.
    """
    path = Path(expand_inputs(cfg.inputs)[0])
    base = replace(cfg, emit_record=False)
    base.validate()
    img, mask = _load(path, base)
    rows = []
    for run in sweep_grid(base):
        try:
            row = vars(run_image(img, run, mask, threads=cfg.threads))
            row["error"] = ""
        except Exception as exc:
            log.warning("sweep run failed: %s", exc)
            n = run.n if run.mode == "adaptive" else 1
            row = dict(epsilon=run.epsilon, m=run.m, b=run.b, n=n, seed=run.seed, error=str(exc))
        rows.append(row)
    return rows


def _timed(fn, repeat: int, warmup: int) -> list[float]:
    for _ in range(warmup):
        fn()
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return samples


def bench(img, cfg: RunConfig) -> dict:
    """Time the reference loop against the vectorised path (metrics excluded).

    Returns per-path samples in seconds, their mean and median, and the
    speedup ``median(reference) / median(parallel)``.
    """
    params = PrivacyParams(cfg.epsilon, cfg.m, cfg.b)
    threads = resolve_threads(cfg.threads)
    runs = {
        "reference": lambda: pixelize_reference(img, params, cfg.seed, noise=cfg.noise),
        "parallel": lambda: pixelize_parallel(img, params, cfg.seed, noise=cfg.noise, threads=threads),
    }
    result = {"height": img.shape[0], "width": img.shape[1], "b": cfg.b, "threads": threads}
    for name, fn in runs.items():
        samples = _timed(fn, cfg.repeat, cfg.warmup)
        result[name] = {
            "samples": samples,
            "mean": statistics.fmean(samples),
            "median": statistics.median(samples),
        }
    result["speedup"] = result["reference"]["median"] / result["parallel"]["median"]
    return result
