"""The public multiply entry points: the full two-convolution pipeline.

One call plans the digit split, converts both inputs to digit grids, runs the
cyclic and negacyclic convolutions per prime, recombines residues (symmetric
lift for one prime, CRT for two or three), and recovers the product by exact
shift-add evaluation at 2^M.
"""

from __future__ import annotations

from dataclasses import dataclass
from time import perf_counter

import numpy as np

from . import _kernels as k
from ._parallel import default_workers, run_sliced
from .codec import bivariate_representation
from .errors import CorruptedConvolutionError
from .modfield import mont_constants
from .ntt2d import _convolve
from .params import MulPlan, build_plan, coefficient_bound
from .zpoly import IntPolynomial, product_bit_width

WORD_BITS = 64
_MASK = (1 << 64) - 1

_STAGES = ("convert", "ntt_forward", "pointwise", "ntt_inverse", "crt", "recover")


@dataclass(frozen=True)
class MulRequest:
    """One multiplication: inputs, prime count (1-3), optional worker bound."""

    a: IntPolynomial
    b: IntPolynomial
    prime_count: int = 2
    worker_hint: int | None = None


@dataclass(frozen=True)
class StageTimings:
    """Wall time per pipeline stage, in seconds."""

    convert: float
    ntt_forward: float
    pointwise: float
    ntt_inverse: float
    crt: float
    recover: float
    total: float
    workers: int

    def stage_sum(self) -> float:
        return (self.convert + self.ntt_forward + self.pointwise
                + self.ntt_inverse + self.crt + self.recover)


def _raise_bound(flag: int, K: int) -> None:
    i, j = divmod(flag, K)
    raise CorruptedConvolutionError(
        f"corrupted convolution: coefficient bound exceeded at ({i}, {j})"
    )


def _combine_residues(grids, plan: MulPlan, rows: int, workers: int) -> np.ndarray:
    """Residue grids (one per prime) -> (rows, K, e) signed two's-complement limbs."""
    K, e = plan.K, plan.e
    out = np.zeros((rows, K, e), dtype=np.uint64)
    bound = coefficient_bound(plan.d, K, plan.M) // 2
    if len(grids) == 1:
        p = plan.primes[0].p
        g = grids[0].data
        flags = run_sliced(
            rows, workers,
            lambda lo, hi: k.lift1_rows(g, out, lo, hi, np.uint64(p), np.uint64(bound)),
        )
    elif len(grids) == 2:
        p1, p2 = plan.primes[0].p, plan.primes[1].p
        _, ninv2 = mont_constants(plan.primes[1])
        inv12m = pow(p1, -1, p2) * ((1 << 64) % p2) % p2
        prod = p1 * p2
        half = (prod - 1) // 2
        g1, g2 = grids[0].data, grids[1].data
        flags = run_sliced(
            rows, workers,
            lambda lo, hi: k.crt2_rows(
                g1, g2, out, lo, hi,
                np.uint64(p1), np.uint64(p2), np.uint64(ninv2), np.uint64(inv12m),
                np.uint64(prod >> 64), np.uint64(prod & _MASK),
                np.uint64(half >> 64), np.uint64(half & _MASK),
                np.uint64(bound >> 64), np.uint64(bound & _MASK),
            ),
        )
    else:
        flags = [_combine_three(grids, plan, rows, out, bound)]
    bad = [f for f in flags if f is not None and f >= 0]
    if bad:
        _raise_bound(min(bad), K)
    return out


def _combine_three(grids, plan: MulPlan, rows: int, out: np.ndarray, bound: int):
    # Three primes stay on Python integers; this path trades speed for
    # simplicity and is exercised at moderate sizes.
    p1, p2, p3 = (s.p for s in plan.primes)
    inv1 = pow(p1, -1, p2)
    p12 = p1 * p2
    inv2 = pow(p12, -1, p3)
    prod = p12 * p3
    half = (prod - 1) // 2
    enc_mask = (1 << (64 * plan.e)) - 1
    g1, g2, g3 = (g.data for g in grids)
    K, e = plan.K, plan.e
    for i in range(rows):
        r1, r2, r3 = g1[i], g2[i], g3[i]
        for j in range(K):
            x = int(r1[j])
            x += p1 * ((int(r2[j]) - x) * inv1 % p2)
            x += p12 * ((int(r3[j]) - x) * inv2 % p3)
            if x > half:
                x -= prod
            if abs(x) > bound:
                return i * K + j
            enc = x & enc_mask
            for t in range(e):
                out[i, j, t] = (enc >> (64 * t)) & _MASK
    return -1


def _run_pipeline(req: MulRequest):
    workers = req.worker_hint if req.worker_hint else default_workers()
    t_begin = perf_counter()
    plan = build_plan(req.a, req.b, req.prime_count)
    timings = dict.fromkeys(_STAGES, 0.0)
    t0 = perf_counter()
    da = bivariate_representation(req.a, plan, workers)
    db = bivariate_representation(req.b, plan, workers)
    timings["convert"] += perf_counter() - t0
    rows = req.a.degree_plus_one + req.b.degree_plus_one - 1
    cyc, neg = [], []
    for idx in range(len(plan.primes)):
        cyc.append(_convolve(da, db, plan, idx, False, workers, timings))
        neg.append(_convolve(da, db, plan, idx, True, workers, timings))
    t0 = perf_counter()
    c_plus = _combine_residues(neg, plan, rows, workers)
    c_minus = _combine_residues(cyc, plan, rows, workers)
    timings["crt"] += perf_counter() - t0
    t0 = perf_counter()
    out_bits = product_bit_width(req.a, req.b)
    out_words = np.zeros((rows, -(-out_bits // WORD_BITS)), dtype=np.uint64)
    flags = run_sliced(
        rows, workers,
        lambda lo, hi: k.recover_rows(c_plus, c_minus, lo, hi, plan.M, plan.N, plan.f, out_words),
    )
    bad = [f for f in flags if f >= 0]
    if bad:
        raise CorruptedConvolutionError(
            f"corrupted convolution: odd combination at coefficient {min(bad)}"
        )
    result = IntPolynomial(out_words, out_bits)
    timings["recover"] += perf_counter() - t0
    stats = StageTimings(
        total=perf_counter() - t_begin, workers=workers, **timings
    )
    return result, stats


def multiply(req: MulRequest) -> IntPolynomial:
    """Exact product of req.a and req.b.

    The result does not depend on prime_count or worker_hint; both only change
    how the work is carried out.
    """
    result, _ = _run_pipeline(req)
    return result


def multiply_with_stats(req: MulRequest) -> tuple[IntPolynomial, StageTimings]:
    """Like multiply, plus wall-clock time per pipeline stage."""
    return _run_pipeline(req)
