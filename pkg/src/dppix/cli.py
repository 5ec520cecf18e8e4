"""Command line front end: ``dppx <subcommand> ...``.

Exit codes: 0 success, 1 some batch/sweep runs failed, 2 usage or invalid
input, 3 I/O error, 4 corrupt or unreadable record, 5 reconstruction mismatch.
"""

from __future__ import annotations

import argparse
import csv
import logging
import secrets
import sys
from pathlib import Path

import numpy as np

from . import record as rec
from .errors import ConsistencyError, InvalidParameterError, RecordError
from .metrics import write_reports
from .pgm import read_image, write_image
from .runner import RunConfig, bench, run_batch, run_sweep

EXIT_OK = 0
EXIT_FAILED_RUNS = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_RECORD = 4
EXIT_CONSISTENCY = 5

log = logging.getLogger("dppx")


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, ConsistencyError):
        return EXIT_CONSISTENCY
    if isinstance(exc, RecordError):
        return EXIT_RECORD
    if isinstance(exc, (InvalidParameterError, ValueError)):
        return EXIT_USAGE
    if isinstance(exc, OSError):
        return EXIT_IO
    return EXIT_FAILED_RUNS


def _u64(text: str) -> int:
    value = int(text, 10)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _add_privacy_flags(p: argparse.ArgumentParser, many: bool = False) -> None:
    nargs = "+" if many else None
    p.add_argument("--epsilon", type=_positive_float, nargs=nargs, default=[0.5] if many else 0.5,
                   help="privacy budget (default 0.5)")
    p.add_argument("--m", type=_positive_int, nargs=nargs, default=[16] if many else 16,
                   help="maximum number of differing pixels (default 16)")
    p.add_argument("--grid", type=_positive_int, nargs=nargs, default=[16] if many else 16,
                   help="grid side b in pixels (default 16)")
    p.add_argument("--threads", type=int, default=0,
                   help="worker threads, 0 = $DPPX_THREADS or all cores")
    p.add_argument("--no-noise", action="store_true",
                   help="skip the Laplace noise (NOT private, testing only)")


def _add_seed_flags(p: argparse.ArgumentParser, many: bool = False) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--seed", type=_u64, nargs="+" if many else None,
                   help="64-bit noise seed (decimal)")
    g.add_argument("--random-seed", action="store_true",
                   help="draw a fresh seed and print it")


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", metavar="DIR", required=True, help="output directory")
    p.add_argument("--emit", choices=("image", "record", "both"), default=None,
                   help="what to write (default: both; image for --mode reference)")
    p.add_argument("--no-check", action="store_true",
                   help="skip the decode/reconstruct consistency check")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dppx", description="Differentially private image pixelization.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pixelize", help="uniform pixelization of PGM images or directories")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--mode", choices=("uniform", "reference"), default="uniform")
    _add_privacy_flags(p)
    _add_seed_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("adaptive", help="region-adaptive pixelization with a simple-region mask")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--mask", help="mask PGM, or a directory of masks matched by file stem")
    p.add_argument("--subgrid-n", type=_positive_int, default=1, help="subgrid division factor n (must divide --grid)")
    _add_privacy_flags(p)
    _add_seed_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("reconstruct", help="rebuild pixelized images from .dppx records")
    p.add_argument("records", nargs="+")
    p.add_argument("--out", metavar="DIR", required=True)

    p = sub.add_parser("verify", help="check record integrity, optionally against an emitted image")
    p.add_argument("record")
    p.add_argument("--image", help="pixelized PGM the record must reproduce exactly")

    p = sub.add_parser("sweep", help="parameter sweep on one image, CSV report")
    p.add_argument("input")
    p.add_argument("--mode", choices=("uniform", "adaptive", "reference"), default="uniform")
    p.add_argument("--mask")
    p.add_argument("--subgrid-n", type=_positive_int, nargs="+", default=[1])
    _add_privacy_flags(p, many=True)
    _add_seed_flags(p, many=True)
    p.add_argument("--csv", help="report path (default: stdout)")

    p = sub.add_parser("bench", help="time the reference loop against the parallel path")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("input", nargs="?")
    src.add_argument("--synthetic", metavar="HxW", help="benchmark a random image of this size")
    _add_privacy_flags(p)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--repeat", type=_positive_int, default=10)
    p.add_argument("--warmup", type=int, default=1)
    p.add_argument("--csv", help="write every timing sample here")
    return parser


def _seed(args, many=False):
    if args.random_seed:
        seed = secrets.randbits(64)
        print(f"seed: {seed}", file=sys.stderr)
        return [seed] if many else seed
    return args.seed


def _warn_no_noise(args) -> None:
    if getattr(args, "no_noise", False):
        print("warning: --no-noise output is NOT differentially private", file=sys.stderr)


def _config_from(args, mode: str) -> RunConfig:
    emit = args.emit or ("image" if mode == "reference" else "both")
    return RunConfig(
        inputs=args.inputs, out_dir=args.out, mode=mode,
        epsilon=args.epsilon, m=args.m, b=args.grid, n=getattr(args, "subgrid_n", 1),
        seed=_seed(args), mask=getattr(args, "mask", None),
        emit_image=emit in ("image", "both"), emit_record=emit in ("record", "both"),
        check=not args.no_check, threads=args.threads, noise=not args.no_noise,
    )


def _cmd_run(args, mode: str) -> int:
    if mode == "adaptive" and not args.mask:
        raise InvalidParameterError("adaptive mode requires --mask")
    _warn_no_noise(args)
    cfg = _config_from(args, mode)
    results = run_batch(cfg)
    if not results:
        raise InvalidParameterError("no input images found")
    codes = []
    reports = []
    for path, outcome in results:
        if isinstance(outcome, Exception):
            print(f"error: {path}: {outcome}", file=sys.stderr)
            codes.append(_exit_code(outcome))
        else:
            reports.append(outcome)
    Path(cfg.out_dir).mkdir(parents=True, exist_ok=True)
    write_reports(Path(cfg.out_dir) / "report.csv", reports)
    write_reports(sys.stdout, reports)
    if not codes:
        return EXIT_OK
    return codes[0] if len(results) == 1 else EXIT_FAILED_RUNS


def _cmd_reconstruct(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for path in map(Path, args.records):
        img = rec.reconstruct(rec.load(path))
        write_image(out / (path.stem + ".pgm"), img)
    return EXIT_OK


def _cmd_verify(args) -> int:
    record = rec.load(args.record)
    img = rec.reconstruct(record)
    kind = "uniform" if record.mode == rec.MODE_UNIFORM else "adaptive"
    print(f"{args.record}: ok ({kind}, {record.height}x{record.width}, b={record.b}, n={record.n})")
    if args.image:
        emitted = read_image(args.image)
        if emitted.shape != img.shape or not np.array_equal(emitted, img):
            raise ConsistencyError(f"{args.image} does not match the reconstruction of {args.record}")
        print(f"{args.image}: matches reconstruction")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    if args.mode == "adaptive" and not args.mask:
        raise InvalidParameterError("adaptive mode requires --mask")
    _warn_no_noise(args)
    seeds = _seed(args, many=True)
    cfg = RunConfig(
        inputs=[args.input], mode=args.mode, mask=args.mask,
        epsilon=args.epsilon[0], m=args.m[0], b=args.grid[0], n=args.subgrid_n[0], seed=seeds[0],
        epsilons=args.epsilon, ms=args.m, bs=args.grid, ns=args.subgrid_n, seeds=seeds,
        emit_image=False, emit_record=False, threads=args.threads, noise=not args.no_noise,
    )
    rows = run_sweep(cfg)
    if args.csv:
        write_reports(args.csv, rows, extra=["error"])
    else:
        write_reports(sys.stdout, rows, extra=["error"])
    return EXIT_FAILED_RUNS if any(r["error"] for r in rows) else EXIT_OK


def _cmd_bench(args) -> int:
    if args.synthetic:
        try:
            h, w = (int(v) for v in args.synthetic.lower().split("x"))
        except ValueError:
            raise InvalidParameterError(f"--synthetic expects HxW, got {args.synthetic!r}") from None
        img = np.random.default_rng(args.seed).integers(0, 256, (h, w), dtype=np.uint8)
    else:
        img = read_image(args.input)
    _warn_no_noise(args)
    cfg = RunConfig(epsilon=args.epsilon, m=args.m, b=args.grid, seed=args.seed,
                    threads=args.threads, noise=not args.no_noise,
                    repeat=args.repeat, warmup=args.warmup)
    res = bench(img, cfg)
    print(f"image {res['height']}x{res['width']}, b={res['b']}, threads={res['threads']}, repeat={args.repeat}")
    for name in ("reference", "parallel"):
        r = res[name]
        print(f"{name:>9}: mean {r['mean'] * 1e3:9.3f} ms   median {r['median'] * 1e3:9.3f} ms")
    print(f"  speedup: {res['speedup']:.2f}x (median reference / median parallel)")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["path", "repetition", "seconds"])
            for name in ("reference", "parallel"):
                for i, t in enumerate(res[name]["samples"]):
                    writer.writerow([name, i, f"{t:.9f}"])
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "pixelize":
            return _cmd_run(args, args.mode)
        if args.command == "adaptive":
            return _cmd_run(args, "adaptive")
        if args.command == "reconstruct":
            return _cmd_reconstruct(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "bench":
            return _cmd_bench(args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code(exc)
    parser.error(f"unknown command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
