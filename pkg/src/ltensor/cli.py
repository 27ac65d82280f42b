"""Command-line front end: ``ltensor {compress,recognize,verify,bench}``.

Exit codes: 0 success, 1 a verification check failed, 2 bad input (I/O,
format, dimensions, arguments), 3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from .decomp import l_svd
from .errors import DimensionError, FormatError, LTensorError
from .io import read_lt4d, read_ppm_dir, write_lt4d, write_manifest
from .pipelines import (
    arrange_video,
    classify,
    compress_sweep,
    pad_to_dyadic,
    reports_to_csv,
    train_recognizer,
)
from .transforms import make_transform
from .verify import SUITES, format_table, run_suites

log = logging.getLogger("ltensor")

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3

TRANSFORM_METHODS = {"dft": "tsvd_dft", "dct": "dct_svd", "dwt": "dwt_svd", "id": "svd"}
LOG_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


class InputError(Exception):
    """Bad command-line input; mapped to exit code 2."""


def _r_list(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--r expects a comma list of integers, got {text!r}") from None
    if not values or any(v < 1 for v in values) or any(b <= a for a, b in zip(values, values[1:])):
        raise argparse.ArgumentTypeError(f"--r must be strictly ascending positive integers, got {text!r}")
    return values


def _dims(text):
    try:
        dims = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"--dims expects n1,n2,n3,n4, got {text!r}") from None
    if len(dims) != 4 or min(dims) < 1:
        raise argparse.ArgumentTypeError(f"--dims expects four positive integers, got {text!r}")
    return dims


def _load_tensor(path):
    path = Path(path)
    if path.is_dir():
        return arrange_video(read_ppm_dir(path))
    if not path.exists():
        raise InputError(f"{path}: no such file or directory")
    return read_lt4d(path)


def _write_text(path, text):
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def run_compress(args):
    A = _load_tensor(args.input)
    crop = None
    if args.transform == "dwt" and args.pad:
        crop = A.shape[2:]
        A = pad_to_dyadic(A)
    log.info("compressing %s with %s at r=%s", A.shape, args.transform, args.r)
    reports = compress_sweep(
        A, TRANSFORM_METHODS[args.transform], args.r, threads=args.threads, crop=crop
    )
    _write_text(args.out, reports_to_csv(reports))
    return EXIT_OK


def _training_columns(path):
    path = Path(path)
    if path.is_dir():
        files = sorted(path.glob("*.lt4d"))
        if not files:
            raise InputError(f"{path}: no .lt4d files found")
        return [read_lt4d(f) for f in files]
    F = _load_tensor(path)
    return [F[:, j:j + 1] for j in range(F.shape[1])]


def run_recognize(args):
    videos = _training_columns(args.input)
    n1, _, n3, n4 = videos[0].shape
    t = make_transform(args.transform, n3, n4)
    r = args.r[-1] if args.r else n1
    model = train_recognizer(t, videos, min(r, n1))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_lt4d(out / "mean.lt4d", model.mean)
        write_lt4d(out / "basis.lt4d", model.basis)
        write_lt4d(out / "gallery.lt4d", model.gallery)
        write_manifest(
            out / "manifest.txt",
            {"kind": "recognizer", "transform": t.kind.value, "dims": f"{n1},1,{n3},{n4}",
             "r": model.r, "classes": model.n_classes, "degenerate": int(model.degenerate)},
        )
    if args.probe:
        probes = _load_tensor(args.probe)
        truth = None
    else:
        probes = np.concatenate(videos, axis=1)
        truth = list(range(len(videos)))
    correct = 0
    for j in range(probes.shape[1]):
        label, dist = classify(model, probes[:, j:j + 1])
        print(f"probe {j}: class {label} distances " + " ".join(f"{d:.6g}" for d in dist))
        if truth is not None:
            correct += label == truth[j]
    if truth is not None:
        print(f"accuracy {100.0 * correct / len(truth):.1f}% ({correct}/{len(truth)})")
    return EXIT_OK


def run_verify(args):
    names = None if args.suite in (None, "all") else args.suite.split(",")
    checks = run_suites(names, seed=args.seed, max_dim=args.max_dim, fault=args.inject_fault)
    print(format_table(checks))
    failed = [c for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return EXIT_VERIFY if failed else EXIT_OK


def run_bench(args):
    rng = np.random.default_rng(args.seed)
    n1, n2, n3, n4 = args.dims
    A = rng.standard_normal(args.dims)
    dims = "x".join(str(d) for d in args.dims)
    lines = ["method,dims,runtime_ms"]
    for kind in ("dft", "dct", "dwt", "id"):
        try:
            t = make_transform(kind, n3, n4)
        except DimensionError:
            log.info("skipping %s: unsupported dims %s", kind, dims)
            continue
        l_svd(t, A)  # warm-up (wavelet matrices, FFT plans)
        best = np.inf
        for _ in range(args.repeats):
            start = time.perf_counter()
            l_svd(t, A)
            best = min(best, time.perf_counter() - start)
        lines.append(f"{TRANSFORM_METHODS[kind]},{dims},{1e3 * best:.6g}")
    _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="ltensor", description="Transform-based fourth-order tensor toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, transform_default="dct"):
        p.add_argument("--transform", choices=sorted(TRANSFORM_METHODS), default=transform_default)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1, help="worker threads; 1 is bit-deterministic")
        p.add_argument("--out", default=None, help="output path (default: stdout)")

    p = sub.add_parser("compress", help="truncation sweep with RSE/ratio CSV report")
    common(p)
    p.add_argument("--in", dest="input", required=True, help="LT4D file or directory of PPM frames")
    p.add_argument("--r", type=_r_list, required=True, help="comma list of ranks, ascending")
    p.add_argument("--pad", action="store_true", help="zero-pad to powers of two for dwt")
    p.set_defaults(func=run_compress)

    p = sub.add_parser("recognize", help="train on videos and classify probes")
    common(p)
    p.add_argument("--in", dest="input", required=True,
                   help="LT4D with one class per column, or a directory of (n1,1,n3,n4) LT4D files")
    p.add_argument("--probe", default=None, help="LT4D of probe columns (default: the training set)")
    p.add_argument("--r", type=_r_list, default=None, help="basis size (default: n1)")
    p.set_defaults(func=run_recognize)

    p = sub.add_parser("verify", help="run the seeded self-check suites")
    common(p)
    p.add_argument("--suite", default="all", help=f"comma list from {','.join(SUITES)} or 'all'")
    p.add_argument("--max-dim", type=int, default=6)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=run_verify)

    p = sub.add_parser("bench", help="time the L-SVD under each transform")
    common(p)
    p.add_argument("--dims", type=_dims, default=(16, 16, 8, 8))
    p.add_argument("--repeats", type=int, default=3)
    p.set_defaults(func=run_bench)
    return parser


def _configure_logging():
    level = os.environ.get("LTENSOR_LOG", "error").lower()
    logging.basicConfig(
        level=LOG_LEVELS.get(level, logging.ERROR),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def main(argv=None):
    _configure_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, FormatError, DimensionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (LTensorError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
