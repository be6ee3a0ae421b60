"""Independent reference multipliers used to test the convolution pipeline.

These run on Python's arbitrary-precision integers, never on the fixed-width
word machinery, so a bug in one representation cannot hide in the other.
"""

from __future__ import annotations

from .errors import EmptyInputError
from .params import twos_complement_width
from .zpoly import IntPolynomial, product_bit_width

_ORACLE_DIM_CAP = 16


def schoolbook_multiply(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """Plain double-loop product; deliberately naive."""
    if a.is_zero() or b.is_zero():
        raise EmptyInputError("empty input: zero polynomial")
    ca, cb = a.coefficients(), b.coefficients()
    out = [0] * (len(ca) + len(cb) - 1)
    for i, x in enumerate(ca):
        if x == 0:
            continue
        for j, y in enumerate(cb):
            out[i + j] += x * y
    return IntPolynomial.from_coefficients(out, bit_width=product_bit_width(a, b))


def _eval_pow2(coeffs, shift_bits: int) -> int:
    # Balanced-tree evaluation at 2^shift_bits keeps packing quasi-linear.
    n = len(coeffs)
    if n == 1:
        return coeffs[0]
    h = n // 2
    return _eval_pow2(coeffs[:h], shift_bits) + (
        _eval_pow2(coeffs[h:], shift_bits) << (shift_bits * h)
    )


def _chunks_pow2(x: int, shift_bits: int, count: int) -> list:
    # x >= 0; split into `count` unsigned chunks of shift_bits bits each.
    if count == 1:
        return [x]
    h = count // 2
    mask = (1 << (shift_bits * h)) - 1
    return _chunks_pow2(x & mask, shift_bits, h) + _chunks_pow2(
        x >> (shift_bits * h), shift_bits, count - h
    )


def kronecker_multiply(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """Pack each polynomial into one integer, multiply once, unpack with signs.

    Slots are 2N + ceil(log2 d) + 1 bits wide, enough that every product
    coefficient stays clear of its neighbours including sign.
    """
    if a.is_zero() or b.is_zero():
        raise EmptyInputError("empty input: zero polynomial")
    ca, cb = a.coefficients(), b.coefficients()
    d = max(len(ca), len(cb))
    n_in = max(
        max(twos_complement_width(c) for c in ca),
        max(twos_complement_width(c) for c in cb),
    )
    slot = 2 * n_in + (d - 1).bit_length() + 1
    prod = _eval_pow2(ca, slot) * _eval_pow2(cb, slot)
    nslots = len(ca) + len(cb)  # one spare slot absorbs the top sign
    enc = prod & ((1 << (slot * nslots)) - 1)
    chunks = _chunks_pow2(enc, slot, nslots)
    half = 1 << (slot - 1)
    base = 1 << slot
    out = []
    carry = 0
    for j in range(nslots - 1):
        c = chunks[j] + carry
        if c >= half:
            out.append(c - base)
            carry = 1
        else:
            out.append(c)
            carry = 0
    top = chunks[-1] + carry - (base if prod < 0 else 0)
    assert top == 0, "sign slot must cancel after unpacking"
    return IntPolynomial.from_coefficients(
        out[: len(ca) + len(cb) - 1], bit_width=product_bit_width(a, b)
    )


def naive_bivariate_convolution(a, b, fold: str = "none"):
    """Definitional double-sum product of two digit matrices.

    c[i][j] = sum over l+m=i, k+h=j of a[l][k] * b[m][h].  fold='none' keeps
    all 2K-1 columns; 'cyclic' folds x^(j+K) onto x^j; 'negacyclic' folds with
    a sign flip.  Quadratic in both dimensions, so sizes are capped.
    """
    if fold not in ("none", "cyclic", "negacyclic"):
        raise ValueError(f"unknown fold {fold!r}")
    if a.K != b.K or a.M != b.M:
        raise ValueError("digit matrices disagree on K or M")
    if max(a.d, b.d) > _ORACLE_DIM_CAP or a.K > _ORACLE_DIM_CAP:
        raise ValueError(
            f"oracle guard: naive convolution is capped at d, K <= {_ORACLE_DIM_CAP}"
        )
    K = a.K
    rows = a.d + b.d - 1
    full = [[0] * (2 * K - 1) for _ in range(rows)]
    for l in range(a.d):
        for m in range(b.d):
            row_a = a.digits[l]
            row_b = b.digits[m]
            target = full[l + m]
            for kk in range(K):
                av = int(row_a[kk])
                if av == 0:
                    continue
                for h in range(K):
                    target[kk + h] += av * int(row_b[h])
    if fold == "none":
        return full
    sign = 1 if fold == "cyclic" else -1
    folded = []
    for row in full:
        out = row[:K]
        for j in range(K, 2 * K - 1):
            out[j - K] += sign * row[j]
        folded.append(out)
    return folded
