"""Conversion between integer polynomials and bivariate digit grids, and the
shift-add recovery of the product from the two convolutions.

A coefficient becomes K balanced digits in [-2^(M-1), 2^(M-1)-1]; evaluating
the digit row at 2^M reconstructs it exactly.  Recovery builds
u_i = sum_j cplus[i][j] * 2^(M j) and v_i likewise from cminus, then
c_i = (u_i + v_i)/2 + 2^N (v_i - u_i)/2 with both halvings exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as k
from ._parallel import run_sliced
from .errors import CorruptedConvolutionError, EncodingError, ParityError
from .params import MulPlan, balanced_capacity
from .zpoly import IntPolynomial, WideInt, wide_add_shifted, wide_halve

WORD_BITS = 64


@dataclass
class DigitMatrix:
    """d x K matrix of signed base-2^M digits, row i encoding coefficient i."""

    d: int
    K: int
    M: int
    digits: np.ndarray  # (d, K) int64, row-major

    def row_value(self, i: int) -> int:
        """Evaluate row i at 2^M; inverse of the digit split."""
        acc = 0
        for j in range(self.K - 1, -1, -1):
            acc = (acc << self.M) + int(self.digits[i, j])
        return acc


@dataclass
class ConvolutionResult:
    """Folded convolution coefficients, (2d-1) rows by K columns of integers,
    each bounded by 2 d K 2^(2M) in magnitude."""

    c_plus: list
    c_minus: list

    @property
    def rows(self) -> int:
        return len(self.c_plus)

    @property
    def cols(self) -> int:
        return len(self.c_plus[0])


def _words_at_width(poly: IntPolynomial, nwords: int) -> np.ndarray:
    if poly.coeff_words == nwords:
        return poly.words
    if poly.coeff_words < nwords:
        out = np.zeros((poly.degree_plus_one, nwords), dtype=np.uint64)
        out[:, : poly.coeff_words] = poly.words
        negative = (poly.words[:, -1] >> np.uint64(63)).astype(bool)
        out[negative, poly.coeff_words:] = np.uint64(0xFFFFFFFFFFFFFFFF)
        return out
    return np.ascontiguousarray(poly.words[:, :nwords])


def bivariate_representation(a: IntPolynomial, plan: MulPlan, workers: int = 1) -> DigitMatrix:
    """Split every coefficient of a into K balanced M-bit digits.

    Low-to-high M-bit chunks, lowering any chunk >= 2^(M-1) by the base with a
    carry into the next; the top chunk absorbs the final carry.
    """
    lo_cap, hi_cap = balanced_capacity(plan.K, plan.M)
    if a.bit_width > plan.N:
        lo, hi = a.min_coefficient(), a.max_coefficient()
        if lo < -(1 << (plan.N - 1)) or hi > (1 << (plan.N - 1)) - 1:
            raise EncodingError(
                f"coefficient outside the plan's {plan.N}-bit range"
            )
    nwords = -(-plan.N // WORD_BITS)
    words = _words_at_width(a, nwords)
    d = a.degree_plus_one
    digits = np.empty((d, plan.K), dtype=np.int64)
    flags = run_sliced(
        d, workers,
        lambda lo, hi: k.digits_rows(words, digits, lo, hi, plan.K, plan.M, plan.N),
    )
    bad = [f for f in flags if f >= 0]
    if bad:
        i = min(bad)
        raise EncodingError(
            f"coefficient {i} = {a.coefficient(i)} exceeds the digit capacity "
            f"[{lo_cap}, {hi_cap}] of K={plan.K}, M={plan.M}"
        )
    return DigitMatrix(d=d, K=plan.K, M=plan.M, digits=digits)


def fold_to_c_plus_minus(full) -> ConvolutionResult:
    """Fold a full 2K-1 column product into the cyclic/negacyclic pair.

    Test oracle only: cplus[i][j] = c[i][j] - c[i][j+K] and
    cminus[i][j] = c[i][j] + c[i][j+K], with the vanishing column 2K-1
    treated as zero.
    """
    rows = [list(map(int, row)) for row in full]
    width = len(rows[0])
    if width % 2 == 0:
        raise ValueError("full product rows must have 2K-1 columns")
    K = (width + 1) // 2
    c_plus, c_minus = [], []
    for row in rows:
        if len(row) != width:
            raise ValueError("ragged product rows")
        padded = row + [0]
        c_plus.append([padded[j] - padded[j + K] for j in range(K)])
        c_minus.append([padded[j] + padded[j + K] for j in range(K)])
    return ConvolutionResult(c_plus=c_plus, c_minus=c_minus)


def recover_product(result: ConvolutionResult, plan: MulPlan) -> IntPolynomial:
    """Reference shift-add recovery using fixed-width word accumulators.

    The fused compiled path in `multiplier` computes the same values; this one
    stays word-by-word so tests can cross-check it.
    """
    rows = plan.rows_out
    if result.rows != rows or result.cols != plan.K:
        raise ValueError(
            f"convolution result is {result.rows}x{result.cols}, "
            f"plan wants {rows}x{plan.K}"
        )
    e, f, M, N = plan.e, plan.f, plan.M, plan.N
    out_bits = (plan.d << max(2 * N - 2, 0)).bit_length() + 1
    cap_words = -(-N // WORD_BITS) + f + 2
    coeffs = []
    for i in range(rows):
        u = WideInt.zeros(f + 1)
        v = WideInt.zeros(f + 1)
        for j in range(plan.K):
            u = wide_add_shifted(u, WideInt.from_int(result.c_plus[i][j], e), M * j)
            v = wide_add_shifted(v, WideInt.from_int(result.c_minus[i][j], e), M * j)
        s = wide_add_shifted(WideInt(u.words), v, 0, 1)
        t = wide_add_shifted(WideInt(v.words), u, 0, -1)
        try:
            s = wide_halve(s)
            t = wide_halve(t)
        except ParityError as exc:
            raise CorruptedConvolutionError(
                f"corrupted convolution: odd combination at coefficient {i}"
            ) from exc
        acc = wide_add_shifted(WideInt.zeros(cap_words), s, 0)
        acc = wide_add_shifted(acc, t, N)
        coeffs.append(acc.to_int())
    return IntPolynomial.from_coefficients(coeffs, bit_width=out_bits)
