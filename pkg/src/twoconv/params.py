"""Multiplication plans: digit-split parameters, Fourier primes, prime tables.

A plan fixes everything one product needs: the coefficient bit width N, the
digit split N = K * M (K digits of M bits each, K a power of two), the
transform length in the outer variable, the recovery primes, and the word
counts of intermediate values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .errors import EmptyInputError, PrimeCapacityError, TransformLengthError

WORD_BITS = 64

# Digits are stored as single signed machine words and embedded into Z/p with
# one conditional add, which needs |digit| <= 2^62 < p.
MAX_DIGIT_BITS = 63

# Above this many grid slots per convolution the planner halves the digit
# count K (widening M) to shrink transform work, as long as the prime product
# still recovers the convolution coefficients exactly.  Tunable.
GRID_REBALANCE_THRESHOLD = 1 << 18

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _ceil_log2(n: int) -> int:
    return (n - 1).bit_length() if n > 1 else 0


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


@dataclass(frozen=True)
class PrimeSpec:
    """A Fourier prime p = q * 2^k + 1 with a known primitive root of Z/p."""

    p: int
    q: int
    k: int
    generator: int


@dataclass(frozen=True)
class FermatPrimeEntry:
    """One row of the stored generalized Fermat prime list: base^exponent + 1."""

    base: int
    exponent: int
    two_adic_valuation: int

    def value(self) -> int:
        return self.base ** self.exponent + 1


@dataclass(frozen=True)
class MulPlan:
    """All derived parameters of one multiplication."""

    d: int                      # max(deg a, deg b) + 1
    N: int                      # coefficient bit width after padding, N = K * M
    K: int                      # digits per coefficient, power of two >= 2
    M: int                      # digit width in bits
    w: int                      # machine word width
    beta_log2: int              # log2 of the digit base, equal to M
    s_y: int                    # outer transform length, least power of two >= 2d - 1
    primes: tuple[PrimeSpec, ...]
    e: int                      # words per convolution coefficient
    f: int                      # words per recovered u_i / v_i coefficient

    @property
    def rows_out(self) -> int:
        return 2 * self.d - 1


def is_prime_u64(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3e24."""
    if n < 2:
        return False
    for sp in _MR_WITNESSES:
        if n % sp == 0:
            return n == sp
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=4096)
def _odd_prime_factors(n: int) -> frozenset[int]:
    fs = set()
    x = n
    f = 3
    while f * f <= x:
        if x % f == 0:
            fs.add(f)
            while x % f == 0:
                x //= f
        f += 2
    if x > 1:
        fs.add(x)
    return frozenset(fs)


def is_primitive_root(g: int, spec: PrimeSpec) -> bool:
    """Check g^((p-1)/r) != 1 for every prime factor r of p - 1."""
    phi = spec.p - 1
    factors = {2} | _odd_prime_factors(spec.q)
    return all(pow(g, phi // r, spec.p) != 1 for r in factors)


@lru_cache(maxsize=1)
def fourier_prime_table() -> tuple[PrimeSpec, ...]:
    """The bundled prime table, sorted by descending prime value.

    One text line per prime with decimal fields ``p q k generator``; see
    tools/generate_prime_table.py for how the file is produced.
    """
    text = resources.files("twoconv").joinpath("data/fourier_primes.txt").read_text()
    specs = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        p, q, k, g = map(int, line.split())
        specs.append(PrimeSpec(p=p, q=q, k=k, generator=g))
    return tuple(sorted(specs, key=lambda s: s.p, reverse=True))


_FERMAT_ROWS = (
    (2**63 + 2**53, 2, 106),
    (2**64 - 2**50, 4, 200),
    (2**63 + 2**34, 8, 272),
    (2**62 + 2**36, 16, 576),
    (2**62 + 2**56, 32, 1792),
    (2**63 - 2**40, 64, 2560),
    (2**64 - 2**28, 128, 3584),
)


def fermat_prime_table() -> tuple[FermatPrimeEntry, ...]:
    """Generalized Fermat primes of practical interest, as verified constants."""
    return tuple(FermatPrimeEntry(b, e, v) for b, e, v in _FERMAT_ROWS)


def s_y_for(d: int) -> int:
    """Least power of two >= 2d - 1; transforms in y are acyclic at this length."""
    if d < 1:
        raise ValueError("d must be positive")
    return 1 << _ceil_log2(2 * d - 1)


def coefficient_bound(d: int, K: int, M: int) -> int:
    """The prime product must exceed 4 * d * K * 2^(2M) for exact recovery."""
    return (4 * d * K) << (2 * M)


def balanced_capacity(K: int, M: int) -> tuple[int, int]:
    """Value interval representable by K base-2^M digits in [-2^(M-1), 2^(M-1)-1]."""
    beta = 1 << M
    unit = (beta**K - 1) // (beta - 1)
    return -(1 << (M - 1)) * unit, ((1 << (M - 1)) - 1) * unit


def twos_complement_width(x: int) -> int:
    """Minimal two's-complement bit count for x, including the sign bit."""
    return x.bit_length() + 1 if x >= 0 else (-x - 1).bit_length() + 1


def _suitable_primes(min_len: int) -> list[PrimeSpec]:
    return [s for s in fourier_prime_table() if (1 << s.k) >= min_len]


def _bound_recoverable(d: int, K: int, M: int, count: int) -> bool:
    suitable = _suitable_primes(max(K, s_y_for(d)))
    if len(suitable) < count:
        return False
    prod = math.prod(s.p for s in suitable[:count])
    return prod > coefficient_bound(d, K, M)


def recovery_primes(d: int, K: int, M: int, count: int) -> tuple[PrimeSpec, ...]:
    """Pick `count` distinct table primes whose product recovers the convolution.

    Selection is deterministic: the largest primes whose power-of-two subgroup
    covers both transform lengths, largest first.
    """
    if count not in (1, 2, 3):
        raise ValueError(f"prime count must be 1, 2, or 3, got {count}")
    need_len = max(K, s_y_for(d))
    suitable = _suitable_primes(need_len)
    if len(suitable) < count:
        raise TransformLengthError(
            f"transform length unsupported: no {count} stored primes with 2^k >= {need_len}"
        )
    chosen = tuple(suitable[:count])
    bound = coefficient_bound(d, K, M)
    prod = math.prod(s.p for s in chosen)
    if prod <= bound:
        raise PrimeCapacityError(
            f"coefficient bound exceeds prime capacity: need product > 2^{bound.bit_length() - 1}, "
            f"best {count}-prime product has {prod.bit_length()} bits"
        )
    return chosen


def _choose_split(d: int, n_min: int, lo: int, hi: int, prime_count: int) -> tuple[int, int]:
    """Pick (K, M) for coefficients in [lo, hi] with minimal width n_min.

    Starts from the padding rule (K a power of two near min(d, n_min), M the
    matching digit width), then repairs in order: the degenerate M = 1 split,
    digit widths beyond one word, recovery-bound feasibility for the configured
    prime count, transform work at large grids, and digit capacity for the
    actual coefficient extremes.
    """
    K = max(2, 1 << _ceil_log2(min(d, n_min)))
    M = _ceil_div(n_min, K)
    if M == 1:
        # N = K would force K == N; halve K to keep N unchanged when possible.
        if K >= 4:
            K >>= 1
        M = 2
    if M > MAX_DIGIT_BITS:
        K = max(2, 1 << _ceil_log2(_ceil_div(n_min, MAX_DIGIT_BITS)))
        M = max(2, _ceil_div(n_min, K))
    # Widening K (narrowing digits) shrinks the 4dK*2^(2M) bound; grow K until
    # the configured prime count can recover the result.
    while not _bound_recoverable(d, K, M, prime_count) and M > 2:
        K <<= 1
        M = max(2, _ceil_div(n_min, K))
    s_y = s_y_for(d)
    # Large grids: trade digit count for digit width while recovery still works.
    while s_y * K > GRID_REBALANCE_THRESHOLD and K > 2:
        K2 = K >> 1
        M2 = _ceil_div(n_min, K2)
        if M2 > MAX_DIGIT_BITS or not _bound_recoverable(d, K2, M2, prime_count):
            break
        K, M = K2, M2
    # The split must represent every actual coefficient with balanced digits.
    while True:
        cap_lo, cap_hi = balanced_capacity(K, M)
        if cap_lo <= lo and hi <= cap_hi:
            break
        if M < MAX_DIGIT_BITS and _bound_recoverable(d, K, M + 1, prime_count):
            M += 1
        else:
            K <<= 1
            M = max(2, _ceil_div(n_min, K))
    return K, M


def split_for_shape(d: int, n_min: int, prime_count: int = 2) -> tuple[int, int, int]:
    """(N, K, M) for the worst-case coefficient interval of a given width."""
    if d < 1 or n_min < 1:
        raise ValueError("d and n_min must be positive")
    lo = -(1 << (n_min - 1))
    hi = (1 << (n_min - 1)) - 1 if n_min > 1 else 0
    K, M = _choose_split(d, n_min, lo, hi, prime_count)
    return K * M, K, M


def determine_base(a, b, w: int = WORD_BITS, prime_count: int = 2) -> tuple[int, int, int]:
    """Choose (N, K, M) for multiplying polynomials a and b.

    N is the padded coefficient width, K the power-of-two digit count, and M
    the digit width, with N = K * M, K != N and M != N.
    """
    if w != WORD_BITS:
        raise ValueError(f"word width must be {WORD_BITS}")
    if a.is_zero() or b.is_zero():
        raise EmptyInputError("empty input: zero polynomial")
    d = max(a.degree_plus_one, b.degree_plus_one)
    lo = min(a.min_coefficient(), b.min_coefficient())
    hi = max(a.max_coefficient(), b.max_coefficient())
    n_min = max(twos_complement_width(lo), twos_complement_width(hi))
    K, M = _choose_split(d, n_min, lo, hi, prime_count)
    return K * M, K, M


def _finish_plan(d: int, K: int, M: int, prime_count: int) -> MulPlan:
    N = K * M
    s_y = s_y_for(d)
    primes = recovery_primes(d, K, M, prime_count)
    e = _ceil_div(2 + _ceil_log2(d * K) + 2 * M, WORD_BITS)
    f = _ceil_div(N, WORD_BITS) + e
    return MulPlan(
        d=d, N=N, K=K, M=M, w=WORD_BITS, beta_log2=M, s_y=s_y,
        primes=primes, e=e, f=f,
    )


def build_plan(a, b, prime_count: int = 2) -> MulPlan:
    """Full plan for multiplying a and b with the given number of primes."""
    N, K, M = determine_base(a, b, prime_count=prime_count)
    return _finish_plan(max(a.degree_plus_one, b.degree_plus_one), K, M, prime_count)


def plan_from_shape(d: int, n_min: int, prime_count: int = 2) -> MulPlan:
    """Plan for worst-case coefficients of width n_min at degree count d."""
    N, K, M = split_for_shape(d, n_min, prime_count)
    return _finish_plan(d, K, M, prime_count)


def plan_for(d: int, K: int, M: int, prime_count: int = 2) -> MulPlan:
    """Plan from an explicit digit split; used by tests and low-level callers."""
    if K < 2 or K & (K - 1):
        raise ValueError("K must be a power of two >= 2")
    if M < 2:
        raise ValueError("M must be at least 2")
    return _finish_plan(d, K, M, prime_count)


def check_plan_invariants(plan: MulPlan) -> None:
    """Re-verify every plan inequality with independent big-integer arithmetic.

    Raises AssertionError on the first violated invariant.
    """
    d, N, K, M = plan.d, plan.N, plan.K, plan.M
    assert N == K * M, "N must equal K * M"
    assert K != N and M != N, "degenerate split: K and M must differ from N"
    assert K >= 2 and K & (K - 1) == 0, "K must be a power of two >= 2"
    assert plan.beta_log2 == M
    assert plan.w == WORD_BITS
    assert plan.s_y >= 2 * d - 1 and plan.s_y & (plan.s_y - 1) == 0
    assert plan.s_y == 1 or plan.s_y // 2 < 2 * d - 1, "s_y must be the least such power"
    assert 1 <= len(plan.primes) <= 3
    prod = 1
    for spec in plan.primes:
        assert spec.p == spec.q * 2**spec.k + 1
        assert is_prime_u64(spec.p), f"{spec.p} is not prime"
        assert is_primitive_root(spec.generator, spec)
        assert 2**spec.k >= K and 2**spec.k >= plan.s_y
        prod *= spec.p
    assert len({s.p for s in plan.primes}) == len(plan.primes)
    assert prod > coefficient_bound(d, K, M), "prime product too small for recovery"
    assert plan.e >= _ceil_div(2 + _ceil_log2(d * K) + 2 * M, WORD_BITS)
    assert plan.f == _ceil_div(N, WORD_BITS) + plan.e
