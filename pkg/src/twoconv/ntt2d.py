"""Row-column 2-D number-theoretic transforms and the two bivariate convolutions.

The cyclic convolution multiplies digit grids modulo x^K - 1 over Z/p; the
y-direction is padded to a power of two at least 2d - 1, so it never wraps.
The negacyclic variant (modulo x^K + 1) scales column j by theta^j, reuses the
cyclic route, and unscales by theta^-j.
"""

from __future__ import annotations

from dataclasses import dataclass
from time import perf_counter

import numpy as np

from . import _kernels as k
from ._parallel import run_sliced
from .errors import TransformLengthError
from .modfield import RootTable, _twiddles, root_table
from .params import MulPlan, PrimeSpec

_R_MOD = 1 << 64


@dataclass
class ResidueGrid:
    """2-D array of canonical residues; row i is y-degree i, column j x-degree j."""

    rows: int
    cols: int
    prime_index: int
    data: np.ndarray  # (rows, cols) uint64, row-major

    def lifted(self, prime: PrimeSpec):
        """Entries as signed integers in [-(p-1)/2, (p-1)/2]."""
        half = (prime.p - 1) // 2
        out = self.data.astype(object)
        return [
            [int(x) - prime.p if int(x) > half else int(x) for x in row]
            for row in out
        ]


def ntt_inplace(v, roots: RootTable, size: int, direction: str = "forward"):
    """Radix-2 transform of length `size` over Z/p, in place.

    Forward output is in bit-reversal order; inverse undoes forward exactly,
    including the 1/size scaling.
    """
    if size < 1 or size & (size - 1):
        raise TransformLengthError(f"length unsupported: {size} is not a power of two")
    if direction not in ("forward", "inverse"):
        raise ValueError("direction must be 'forward' or 'inverse'")
    arr = v if isinstance(v, np.ndarray) else np.array(v, dtype=np.uint64)
    if arr.dtype != np.uint64 or arr.shape != (size,):
        raise ValueError("expected a uint64 vector of the given size")
    if size == 1:
        return arr
    p = roots.prime.p
    pu = np.uint64(p)
    nu = np.uint64(roots.ninv)
    fwd, inv = _twiddles(p, roots.prime.generator, size)
    grid = arr.reshape(1, size)
    if direction == "forward":
        k.ntt_x_fwd(grid, 0, 1, fwd, pu, nu)
    else:
        k.ntt_x_inv(grid, 0, 1, inv, pu, nu)
        r1 = _R_MOD % p
        scale = np.full(size, pow(size, p - 2, p) * r1 % p, dtype=np.uint64)
        k.scale_rows(grid, 0, 1, scale, pu, nu)
    return arr


def _check_shapes(a, b, plan: MulPlan):
    ok = (
        1 <= a.d <= plan.d and 1 <= b.d <= plan.d
        and max(a.d, b.d) == plan.d
        and a.K == b.K == plan.K
    )
    if not ok:
        raise ValueError(
            f"digit matrix shape mismatch: plan wants up to {plan.d}x{plan.K}, "
            f"got {a.d}x{a.K} and {b.d}x{b.K}"
        )


def _convolve(a, b, plan: MulPlan, prime_index: int, twist: bool, workers: int,
              timings: dict | None = None) -> ResidueGrid:
    _check_shapes(a, b, plan)
    prime = plan.primes[prime_index]
    roots = root_table(prime, plan.K, plan.s_y)
    pu = np.uint64(prime.p)
    nu = np.uint64(roots.ninv)
    s_y, K = plan.s_y, plan.K
    ga = np.zeros((s_y, K), dtype=np.uint64)
    gb = np.zeros((s_y, K), dtype=np.uint64)
    t0 = perf_counter()
    if twist:
        run_sliced(a.d, workers, lambda lo, hi: k.embed_rows_scaled(a.digits, ga, lo, hi, roots.twist_in, pu, nu))
        run_sliced(b.d, workers, lambda lo, hi: k.embed_rows_scaled(b.digits, gb, lo, hi, roots.twist_in, pu, nu))
    else:
        run_sliced(a.d, workers, lambda lo, hi: k.embed_rows(a.digits, ga, lo, hi, pu))
        run_sliced(b.d, workers, lambda lo, hi: k.embed_rows(b.digits, gb, lo, hi, pu))
    fwd_y = roots.forward[s_y]
    inv_y = roots.inverse[s_y]
    fwd_x = roots.forward[K]
    inv_x = roots.inverse[K]
    for g in (ga, gb):
        if s_y > 1:
            run_sliced(K, workers, lambda lo, hi, g=g: k.ntt_y_fwd(g, lo, hi, fwd_y, pu, nu))
        run_sliced(s_y, workers, lambda lo, hi, g=g: k.ntt_x_fwd(g, lo, hi, fwd_x, pu, nu))
    t1 = perf_counter()
    run_sliced(s_y, workers, lambda lo, hi: k.pointwise_rows(ga, gb, lo, hi, pu, nu))
    t2 = perf_counter()
    run_sliced(s_y, workers, lambda lo, hi: k.ntt_x_inv(ga, lo, hi, inv_x, pu, nu))
    if s_y > 1:
        run_sliced(K, workers, lambda lo, hi: k.ntt_y_inv(ga, lo, hi, inv_y, pu, nu))
    zvec = roots.scale_negacyclic if twist else roots.scale_cyclic
    run_sliced(s_y, workers, lambda lo, hi: k.scale_rows(ga, lo, hi, zvec, pu, nu))
    t3 = perf_counter()
    if timings is not None:
        timings["ntt_forward"] += t1 - t0
        timings["pointwise"] += t2 - t1
        timings["ntt_inverse"] += t3 - t2
    return ResidueGrid(rows=s_y, cols=K, prime_index=prime_index, data=ga)


def cyclic_convolution(a, b, plan: MulPlan, prime_index: int, workers: int = 1) -> ResidueGrid:
    """a(x,y) * b(x,y) mod (x^K - 1, p), acyclic in y."""
    return _convolve(a, b, plan, prime_index, twist=False, workers=workers)


def negacyclic_convolution(a, b, plan: MulPlan, prime_index: int, workers: int = 1) -> ResidueGrid:
    """a(x,y) * b(x,y) mod (x^K + 1, p), via the theta twist of columns."""
    return _convolve(a, b, plan, prime_index, twist=True, workers=workers)
