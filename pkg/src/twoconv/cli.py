"""Command-line interface: input generation, verification, benchmark sweeps.

    twoconv gen --d 1024 --n 1024 --seed 7 --out a.poly
    twoconv verify a.poly b.poly
    twoconv bench --sweep d=N:2^9..2^12 --algorithms cvl,kronecker \
        --trials 5 --workers 1,max --seed 0 --out results.csv
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .bench import ALGORITHMS, BenchConfig, generate_random_dense, run_benchmark, verify_files
from .errors import BenchMismatchError
from .zpoly import format_polynomial


def _parse_size_token(token: str) -> int:
    token = token.strip()
    if "^" in token:
        base, exp = token.split("^", 1)
        return int(base) ** int(exp)
    return int(token)


def parse_sweep(text: str) -> list:
    """Sweep grammar: 'd=N:2^9..2^12' (doubling range with d = N) or a comma
    list of 'DxN' pairs, e.g. '512x512,1024x256'."""
    text = text.strip()
    if text.startswith("d=N:"):
        span = text[4:]
        if ".." in span:
            lo_s, hi_s = span.split("..", 1)
            lo, hi = _parse_size_token(lo_s), _parse_size_token(hi_s)
            if lo < 1 or hi < lo:
                raise ValueError(f"bad sweep range {text!r}")
            points = []
            size = lo
            while size <= hi:
                points.append((size, size))
                size *= 2
            return points
        return [(s, s) for s in map(_parse_size_token, span.split(","))]
    points = []
    for part in text.split(","):
        if "x" not in part:
            raise ValueError(f"bad sweep point {part!r}; expected DxN")
        ds, ns = part.split("x", 1)
        points.append((_parse_size_token(ds), _parse_size_token(ns)))
    return points


def _parse_workers(text: str) -> tuple:
    counts = []
    for part in text.split(","):
        part = part.strip()
        counts.append(os.cpu_count() or 1 if part == "max" else int(part))
    if any(c < 1 for c in counts):
        raise ValueError("worker counts must be positive")
    return tuple(dict.fromkeys(counts))


def _cmd_gen(args) -> int:
    poly = generate_random_dense(args.d, args.n, args.seed)
    text = format_polynomial(poly)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_verify(args) -> int:
    return verify_files(args.inputs[0], args.inputs[1])


def _cmd_bench(args) -> int:
    try:
        sweep = parse_sweep(args.sweep)
        workers = _parse_workers(args.workers)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    algorithms = tuple(a.strip() for a in args.algorithms.split(",") if a.strip())
    bad = set(algorithms) - set(ALGORITHMS)
    if bad:
        print(f"error: unknown algorithms {sorted(bad)}", file=sys.stderr)
        return 2
    config = BenchConfig(
        sweep=sweep,
        algorithms=algorithms,
        trials=args.trials,
        worker_counts=workers,
        seed=args.seed,
        output_path=args.out,
        render_figure=not args.no_plot,
        figure_path=args.plot,
    )
    try:
        rows = run_benchmark(config)
    except BenchMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.report:
            print(exc.report, file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {len(rows)} rows to {config.output_path}")
    if config.render_figure:
        figure = config.figure_path or Path(config.output_path).with_suffix(".png")
        print(f"wrote figure to {figure}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twoconv",
        description="Dense integer polynomial multiplication benchmarks and checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a random dense polynomial")
    gen.add_argument("--d", type=int, required=True, help="number of coefficients")
    gen.add_argument("--n", type=int, required=True, help="coefficient bit width")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", type=str, default=None, help="output path (default stdout)")
    gen.set_defaults(func=_cmd_gen)

    ver = sub.add_parser("verify", help="cross-check the pipeline against schoolbook")
    ver.add_argument("inputs", nargs=2, metavar="POLY", help="two polynomial files")
    ver.set_defaults(func=_cmd_verify)

    bench = sub.add_parser("bench", help="run a timing sweep and write CSV + figure")
    bench.add_argument("--sweep", type=str, default="d=N:2^9..2^12")
    bench.add_argument("--algorithms", type=str, default="cvl,kronecker")
    bench.add_argument("--trials", type=int, default=5)
    bench.add_argument("--workers", type=str, default="1,max")
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--out", type=str, default="results.csv")
    bench.add_argument("--plot", type=str, default=None,
                       help="figure path (default: CSV path with .png)")
    bench.add_argument("--no-plot", action="store_true", help="skip the figure")
    bench.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
