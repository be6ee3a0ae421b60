"""Random input generation and benchmark sweeps with CSV output.

Each sweep point is validated for cross-algorithm agreement before any timing
is recorded, so a wrong-but-fast result can never look good in the report.
"""

from __future__ import annotations

import csv
import random
import statistics
from dataclasses import dataclass
from pathlib import Path

from .errors import BenchMismatchError
from .multiplier import MulRequest, multiply_with_stats
from .oracle import kronecker_multiply, schoolbook_multiply
from .zpoly import IntPolynomial

ALGORITHMS = ("cvl", "kronecker", "schoolbook")

CSV_COLUMNS = (
    "d", "N", "algorithm", "workers", "trials", "median_ms", "min_ms",
    "correctness_ok", "convert_ms", "ntt_forward_ms", "pointwise_ms",
    "ntt_inverse_ms", "crt_ms", "recover_ms",
)


@dataclass
class BenchConfig:
    sweep: list                      # (d, N) pairs
    algorithms: tuple = ("cvl", "kronecker")
    trials: int = 5
    worker_counts: tuple = (1,)
    seed: int = 0
    output_path: Path | str = "results.csv"
    render_figure: bool = True
    figure_path: Path | str | None = None

    def __post_init__(self):
        if not self.sweep:
            raise ValueError("sweep must contain at least one (d, N) point")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithms: {sorted(unknown)}")


def generate_random_dense(d: int, N: int, seed: int) -> IntPolynomial:
    """Dense polynomial with coefficients uniform over [-2^(N-1), 2^(N-1)-1].

    Deterministic in the seed.  The all-zero draw is rejected and redrawn so
    the result is always a valid multiplication input.
    """
    if d < 1 or N < 1:
        raise ValueError("d and N must be positive")
    rng = random.Random(seed)
    lo, hi = -(1 << (N - 1)), 1 << (N - 1)
    while True:
        coeffs = [rng.randrange(lo, hi) for _ in range(d)]
        if any(coeffs):
            return IntPolynomial.from_coefficients(coeffs, bit_width=N)


def _input_seed(seed: int, d: int, N: int, which: int) -> int:
    return (seed * 0x9E3779B97F4A7C15 + d * 1000003 + N * 7919 + which) % (1 << 63)


def _run_once(algorithm: str, a, b, workers: int):
    """Returns (product, elapsed_seconds, stage_timings_or_None)."""
    from time import perf_counter

    if algorithm == "cvl":
        poly, stats = multiply_with_stats(MulRequest(a, b, worker_hint=workers))
        return poly, stats.total, stats
    t0 = perf_counter()
    fn = kronecker_multiply if algorithm == "kronecker" else schoolbook_multiply
    poly = fn(a, b)
    return poly, perf_counter() - t0, None


def _diff_report(reference: str, others: dict, ref_poly) -> str:
    lines = []
    ref = ref_poly.coefficients()
    for name, poly in others.items():
        got = poly.coefficients()
        if got == ref:
            continue
        upto = min(len(ref), len(got))
        degree = next(
            (k for k in range(upto) if ref[k] != got[k]),
            upto if len(ref) != len(got) else None,
        )
        lines.append(
            f"{name} disagrees with {reference} at degree {degree}: "
            f"{got[degree] if degree is not None and degree < len(got) else '<missing>'} "
            f"vs {ref[degree] if degree is not None and degree < len(ref) else '<missing>'}"
        )
    return "\n".join(lines)


def run_benchmark(config: BenchConfig) -> list[dict]:
    """Execute the sweep, write the CSV (and figure), return the rows."""
    rows = []
    max_workers = max(config.worker_counts) if config.worker_counts else 1
    for d, N in config.sweep:
        a = generate_random_dense(d, N, _input_seed(config.seed, d, N, 0))
        b = generate_random_dense(d, N, _input_seed(config.seed, d, N, 1))
        # Correctness gate: every algorithm must agree before timing counts.
        products = {
            alg: _run_once(alg, a, b, max_workers)[0] for alg in config.algorithms
        }
        names = list(products)
        ref_name = names[0]
        ref = products[ref_name]
        mismatched = {
            n: p for n, p in products.items()
            if p.coefficients() != ref.coefficients()
        }
        if mismatched:
            report = _diff_report(ref_name, mismatched, ref)
            raise BenchMismatchError(
                f"algorithms disagree at d={d}, N={N}", report=report
            )
        for alg in config.algorithms:
            counts = config.worker_counts if alg == "cvl" else (1,)
            for workers in counts:
                times = []
                stage_lists = {key: [] for key in (
                    "convert", "ntt_forward", "pointwise", "ntt_inverse", "crt", "recover")}
                for _ in range(config.trials):
                    _, elapsed, stats = _run_once(alg, a, b, workers)
                    times.append(elapsed * 1e3)
                    if stats is not None:
                        for key in stage_lists:
                            stage_lists[key].append(getattr(stats, key) * 1e3)
                row = {
                    "d": d,
                    "N": N,
                    "algorithm": alg,
                    "workers": workers,
                    "trials": config.trials,
                    "median_ms": round(statistics.median(times), 3),
                    "min_ms": round(min(times), 3),
                    "correctness_ok": True,
                }
                for key, samples in stage_lists.items():
                    row[f"{key}_ms"] = round(statistics.median(samples), 3) if samples else ""
                rows.append(row)
    _write_csv(rows, Path(config.output_path))
    if config.render_figure:
        from .plotting import render_benchmark_figure

        figure_path = config.figure_path
        if figure_path is None:
            figure_path = Path(config.output_path).with_suffix(".png")
        render_benchmark_figure(rows, Path(figure_path))
    return rows


def _write_csv(rows, path: Path) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)


def verify_files(path_a, path_b, emit=print) -> int:
    """Cross-check the compiled pipeline against the schoolbook oracle.

    Returns the process exit status: 0 match, 1 mismatch, 2 unreadable input.
    """
    import sys

    from .errors import PolynomialParseError
    from .zpoly import parse_polynomial

    polys = []
    for path in (path_a, path_b):
        try:
            with open(path, "rb") as handle:
                polys.append(parse_polynomial(handle.read()))
        except (OSError, PolynomialParseError) as exc:
            print(f"error reading {path}: {exc}", file=sys.stderr)
            return 2
    a, b = polys
    fast = multiply_with_stats(MulRequest(a, b))[0].coefficients()
    slow = schoolbook_multiply(a, b).coefficients()
    if fast == slow:
        emit("MATCH")
        return 0
    upto = min(len(fast), len(slow))
    degree = next((k for k in range(upto) if fast[k] != slow[k]), upto)
    emit(f"MISMATCH at degree {degree}")
    return 1
