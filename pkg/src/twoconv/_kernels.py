"""Compiled kernels for the convolution pipeline.

Everything here operates on numpy uint64/int64 arrays and releases the GIL so
slices can run on worker threads.  Modular values are canonical residues in
[0, p); twiddle factors are stored premultiplied by 2^64 mod p so a Montgomery
multiply by a table entry yields a canonical product directly.
"""

import numpy as np
from llvmlite import ir
from numba import njit, types
from numba.extending import intrinsic

_U1 = np.uint64(1)
_U0 = np.uint64(0)
_SIGN64 = np.uint64(1) << np.uint64(63)
_ONES64 = np.uint64(0xFFFFFFFFFFFFFFFF)


@intrinsic
def _mul128(typingctx, a, b):
    """Full 64x64 -> 128-bit product, returned as (hi, lo)."""
    sig = types.UniTuple(types.uint64, 2)(types.uint64, types.uint64)

    def codegen(context, builder, signature, args):
        i128 = ir.IntType(128)
        i64 = ir.IntType(64)
        x = builder.zext(args[0], i128)
        y = builder.zext(args[1], i128)
        prod = builder.mul(x, y)
        hi = builder.trunc(builder.lshr(prod, ir.Constant(i128, 64)), i64)
        lo = builder.trunc(prod, i64)
        return context.make_tuple(builder, signature.return_type, [hi, lo])

    return sig, codegen


@njit(inline="always")
def _mont_mul(a, b, p, ninv):
    # REDC(a * b); result canonical for p < 2^63.
    hi, lo = _mul128(a, b)
    m = lo * ninv
    mhi, _ = _mul128(m, p)
    r = hi + mhi
    if lo != _U0:
        r += _U1
    if r >= p:
        r -= p
    return r


@njit(cache=True)
def mont_mul_probe(a, b, p, ninv):
    # Test hook: exposes the reduction for oracle comparison.
    return _mont_mul(a, b, p, ninv)


@njit(inline="always")
def _add_mod(a, b, p):
    s = a + b
    if s >= p:
        s -= p
    return s


@njit(inline="always")
def _sub_mod(a, b, p):
    s = a + (p - b)
    if s >= p:
        s -= p
    return s


# ---------------------------------------------------------------------------
# Digit extraction and embedding
# ---------------------------------------------------------------------------

@njit(nogil=True, cache=True)
def digits_rows(words, digits, i0, i1, K, M, nbits):
    """Balanced base-2^M digits of two's-complement coefficients.

    Chunks are taken low to high; a chunk >= 2^(M-1) is lowered by 2^M with a
    +1 carry into the next chunk, and the top chunk absorbs the final carry
    under the coefficient's sign.  Returns the first row whose top digit falls
    outside [-2^(M-1), 2^(M-1) - 1], else -1.
    """
    half = _U1 << np.uint64(M - 1)
    beta = _U1 << np.uint64(M)
    mask = beta - _U1
    sq = (nbits - 1) >> 6
    sr = np.uint64((nbits - 1) & 63)
    for i in range(i0, i1):
        negative = (words[i, sq] >> sr) & _U1
        carry = _U0
        for j in range(K):
            off = j * M
            wq = off >> 6
            wr = off & 63
            chunk = words[i, wq] >> np.uint64(wr)
            if wr + M > 64:
                chunk |= words[i, wq + 1] << np.uint64(64 - wr)
            cu = (chunk & mask) + carry
            if j < K - 1:
                if cu >= half:
                    digits[i, j] = -np.int64(beta - cu)
                    carry = _U1
                else:
                    digits[i, j] = np.int64(cu)
                    carry = _U0
            else:
                if negative:
                    if cu < half:
                        return i
                    digits[i, j] = -np.int64(beta - cu)
                else:
                    if cu >= half:
                        return i
                    digits[i, j] = np.int64(cu)
    return -1


@njit(nogil=True, cache=True)
def embed_rows(digits, grid, i0, i1, p):
    # Signed digit -> canonical residue; |digit| < p always holds.
    for i in range(i0, i1):
        for j in range(digits.shape[1]):
            w = np.uint64(digits[i, j])
            if digits[i, j] < 0:
                w += p
            grid[i, j] = w


@njit(nogil=True, cache=True)
def embed_rows_scaled(digits, grid, i0, i1, tvec, p, ninv):
    # Embed and scale column j by tvec[j] (Montgomery form) in one pass.
    for i in range(i0, i1):
        for j in range(digits.shape[1]):
            w = np.uint64(digits[i, j])
            if digits[i, j] < 0:
                w += p
            grid[i, j] = _mont_mul(w, tvec[j], p, ninv)


# ---------------------------------------------------------------------------
# Radix-2 transforms (forward: natural -> bit-reversed, inverse undoes it)
# ---------------------------------------------------------------------------

@njit(nogil=True, cache=True)
def ntt_x_fwd(grid, i0, i1, tw, p, ninv):
    L = grid.shape[1]
    for i in range(i0, i1):
        row = grid[i]
        h = L >> 1
        step = 1
        while h >= 1:
            for start in range(0, L, 2 * h):
                for k in range(h):
                    w = tw[k * step]
                    u = row[start + k]
                    v = row[start + k + h]
                    row[start + k] = _add_mod(u, v, p)
                    row[start + k + h] = _mont_mul(_sub_mod(u, v, p), w, p, ninv)
            h >>= 1
            step <<= 1


@njit(nogil=True, cache=True)
def ntt_x_inv(grid, i0, i1, itw, p, ninv):
    L = grid.shape[1]
    for i in range(i0, i1):
        row = grid[i]
        h = 1
        step = L >> 1
        while h < L:
            for start in range(0, L, 2 * h):
                for k in range(h):
                    w = itw[k * step]
                    u = row[start + k]
                    v = _mont_mul(row[start + k + h], w, p, ninv)
                    row[start + k] = _add_mod(u, v, p)
                    row[start + k + h] = _sub_mod(u, v, p)
            h <<= 1
            step >>= 1


@njit(nogil=True, cache=True)
def ntt_y_fwd(grid, j0, j1, tw, p, ninv):
    # Transform along the row axis for columns [j0, j1); the inner loop runs
    # over the contiguous axis, so strided column access never materializes.
    L = grid.shape[0]
    h = L >> 1
    step = 1
    while h >= 1:
        for start in range(0, L, 2 * h):
            for k in range(h):
                w = tw[k * step]
                r1 = grid[start + k]
                r2 = grid[start + k + h]
                for j in range(j0, j1):
                    u = r1[j]
                    v = r2[j]
                    r1[j] = _add_mod(u, v, p)
                    r2[j] = _mont_mul(_sub_mod(u, v, p), w, p, ninv)
        h >>= 1
        step <<= 1


@njit(nogil=True, cache=True)
def ntt_y_inv(grid, j0, j1, itw, p, ninv):
    L = grid.shape[0]
    h = 1
    step = L >> 1
    while h < L:
        for start in range(0, L, 2 * h):
            for k in range(h):
                w = itw[k * step]
                r1 = grid[start + k]
                r2 = grid[start + k + h]
                for j in range(j0, j1):
                    u = r1[j]
                    v = _mont_mul(r2[j], w, p, ninv)
                    r1[j] = _add_mod(u, v, p)
                    r2[j] = _sub_mod(u, v, p)
        h <<= 1
        step >>= 1


@njit(nogil=True, cache=True)
def pointwise_rows(ga, gb, i0, i1, p, ninv):
    # ga <- ga * gb * 2^-64; the stray factor is cancelled by the final scale.
    for i in range(i0, i1):
        for j in range(ga.shape[1]):
            ga[i, j] = _mont_mul(ga[i, j], gb[i, j], p, ninv)


@njit(nogil=True, cache=True)
def scale_rows(grid, i0, i1, zvec, p, ninv):
    # Final pass: multiply column j by plain zvec[j] (carries 1/(s_y*K), the
    # inverse twist for the negacyclic route, and the 2^64 correction).
    for i in range(i0, i1):
        for j in range(grid.shape[1]):
            grid[i, j] = _mont_mul(grid[i, j], zvec[j], p, ninv)


# ---------------------------------------------------------------------------
# Lifting, CRT, and product recovery
# ---------------------------------------------------------------------------

@njit(inline="always")
def _sub128(ahi, alo, bhi, blo):
    lo = alo - blo
    hi = ahi - bhi
    if alo < blo:
        hi -= _U1
    return hi, lo


@njit(nogil=True, cache=True)
def lift1_rows(grid, out, i0, i1, p, bound):
    """Symmetric lift of one-prime residues into single-word signed values.

    Returns i*K + j of the first entry with magnitude above `bound`, else -1.
    """
    K = out.shape[1]
    half = (p - _U1) >> _U1
    for i in range(i0, i1):
        for j in range(K):
            r = grid[i, j]
            if r > half:
                out[i, j, 0] = r - p
                mag = p - r
            else:
                out[i, j, 0] = r
                mag = r
            if mag > bound:
                return i * K + j
    return -1


@njit(nogil=True, cache=True)
def crt2_rows(g1, g2, out, i0, i1, p1, p2, ninv2, inv12m,
              prod_hi, prod_lo, half_hi, half_lo, bound_hi, bound_lo):
    """Two-prime CRT with symmetric lift into e-limb two's complement.

    Returns i*K + j of the first entry beyond the magnitude bound, else -1.
    """
    K = out.shape[1]
    e = out.shape[2]
    for i in range(i0, i1):
        for j in range(K):
            r1 = g1[i, j]
            r2 = g2[i, j]
            t = r1
            if t >= p2:
                t -= p2
            diff = _sub_mod(r2, t, p2)
            u = _mont_mul(diff, inv12m, p2, ninv2)
            hi, lo = _mul128(p1, u)
            lo2 = lo + r1
            if lo2 < lo:
                hi += _U1
            if hi > half_hi or (hi == half_hi and lo2 > half_lo):
                mag_hi, mag_lo = _sub128(prod_hi, prod_lo, hi, lo2)
                vhi, vlo = _sub128(hi, lo2, prod_hi, prod_lo)
            else:
                mag_hi, mag_lo = hi, lo2
                vhi, vlo = hi, lo2
            if mag_hi > bound_hi or (mag_hi == bound_hi and mag_lo > bound_lo):
                return i * K + j
            out[i, j, 0] = vlo
            if e > 1:
                out[i, j, 1] = vhi
    return -1


@njit
def _acc_add_shifted(acc, limbs, q, r):
    """acc += (sign-extended limbs) << (64*q + r), modulo 2^(64*len(acc))."""
    n = acc.shape[0]
    e = limbs.shape[0]
    sign = _ONES64 if (limbs[e - 1] >> np.uint64(63)) else _U0
    ru = np.uint64(r)
    rc = np.uint64(64 - r) if r else _U0
    carry = _U0
    prev = _U0
    pos = q
    for t in range(e):
        if pos >= n:
            return
        cur = limbs[t]
        spill = (prev >> rc) if r else _U0
        w = ((cur << ru) | spill) if r else cur
        s1 = acc[pos] + w
        c1 = _U1 if s1 < w else _U0
        s2 = s1 + carry
        c2 = _U1 if s2 < carry else _U0
        acc[pos] = s2
        carry = c1 | c2
        prev = cur
        pos += 1
    if pos < n and r:
        spill = prev >> rc
        w = ((sign << ru) | spill)
        s1 = acc[pos] + w
        c1 = _U1 if s1 < w else _U0
        s2 = s1 + carry
        c2 = _U1 if s2 < carry else _U0
        acc[pos] = s2
        carry = c1 | c2
        pos += 1
    # Remaining words of the sign extension; almost always resolved at once.
    while pos < n:
        if sign == _U0:
            if carry == _U0:
                return
            acc[pos] += _U1
            if acc[pos] != _U0:
                return
        else:
            if carry == _U1:
                return
            if acc[pos] != _U0:
                acc[pos] -= _U1
                return
            acc[pos] = _ONES64
        pos += 1


@njit
def _asr1(x):
    n = x.shape[0]
    for t in range(n - 1):
        x[t] = (x[t] >> _U1) | (x[t + 1] << np.uint64(63))
    x[n - 1] = (x[n - 1] >> _U1) | (x[n - 1] & _SIGN64)


@njit(nogil=True, cache=True)
def recover_rows(cp, cm, i0, i1, M, N, f, out):
    """Evaluate the digit rows at 2^M and combine the two convolutions.

    u_i and v_i accumulate in (f+1)-word buffers; the product coefficient is
    (u+v)/2 + 2^N (v-u)/2 written into out[i].  Returns the first row where a
    halving input is odd, else -1.
    """
    K = cp.shape[1]
    nacc = f + 1
    u = np.empty(nacc, np.uint64)
    v = np.empty(nacc, np.uint64)
    s = np.empty(nacc, np.uint64)
    t = np.empty(nacc, np.uint64)
    for i in range(i0, i1):
        for w in range(nacc):
            u[w] = _U0
            v[w] = _U0
        for j in range(K):
            off = M * j
            _acc_add_shifted(u, cp[i, j], off >> 6, off & 63)
            _acc_add_shifted(v, cm[i, j], off >> 6, off & 63)
        carry = _U0
        borrow = _U0
        for w in range(nacc):
            a = u[w]
            b = v[w]
            s1 = a + b
            c1 = _U1 if s1 < b else _U0
            s2 = s1 + carry
            c2 = _U1 if s2 < carry else _U0
            s[w] = s2
            carry = c1 | c2
            d1 = b - a
            b1 = _U1 if b < a else _U0
            d2 = d1 - borrow
            b2 = _U1 if d1 < borrow else _U0
            t[w] = d2
            borrow = b1 | b2
        if (s[0] | t[0]) & _U1:
            return i
        _asr1(s)
        _asr1(t)
        orow = out[i]
        _acc_add_shifted(orow, s, 0, 0)
        _acc_add_shifted(orow, t, N >> 6, N & 63)
    return -1
