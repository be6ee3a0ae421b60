"""Arithmetic in Z/p for word-size Fourier primes.

Residues are plain integers in [0, p).  Root tables are built once per
(prime, plan) and shared read-only; twiddle entries are premultiplied by
2^64 mod p so the compiled butterflies can use Montgomery products while the
data itself stays canonical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import RootOrderError
from .params import PrimeSpec
from .zpoly import WideInt

_R_MOD = 1 << 64


def mod_mul(a: int, b: int, prime: PrimeSpec) -> int:
    return a * b % prime.p


def mod_inv(a: int, prime: PrimeSpec) -> int:
    return pow(a, prime.p - 2, prime.p)


def primitive_root_of_order(n: int, prime: PrimeSpec) -> int:
    """The canonical element of exact multiplicative order n (a power of two),
    derived deterministically as generator^((p-1)/n)."""
    if n < 1 or n & (n - 1):
        raise RootOrderError(f"order {n} is not a power of two")
    if (prime.p - 1) % n:
        raise RootOrderError(f"order unavailable: {n} does not divide p - 1")
    return pow(prime.generator, (prime.p - 1) // n, prime.p)


def lift_symmetric(r: int, prime: PrimeSpec) -> int:
    """The unique integer in [-(p-1)/2, (p-1)/2] congruent to r mod p."""
    return r - prime.p if r > (prime.p - 1) // 2 else r


def crt_combine(residues, primes, width_words: int | None = None) -> WideInt:
    """Signed Chinese-remainder reconstruction across 1 to 3 primes.

    Returns the unique x with |x| <= (prod - 1)/2 and x = r_i mod p_i, as a
    two's-complement WideInt.
    """
    residues = list(residues)
    primes = list(primes)
    if not 1 <= len(residues) <= 3 or len(residues) != len(primes):
        raise ValueError("need 1 to 3 residues with matching primes")
    if len({s.p for s in primes}) != len(primes):
        raise ValueError("moduli not coprime: duplicate primes")
    x = residues[0] % primes[0].p
    prod = primes[0].p
    for r, spec in zip(residues[1:], primes[1:]):
        t = (r - x) * pow(prod, -1, spec.p) % spec.p
        x += prod * t
        prod *= spec.p
    if x > (prod - 1) // 2:
        x -= prod
    if width_words is None:
        width_words = max(1, -(-(x.bit_length() + 1) // 64))
    return WideInt.from_int(x, width_words)


def mont_constants(prime: PrimeSpec) -> tuple[int, int]:
    """(R mod p, -p^-1 mod 2^64) for the compiled Montgomery kernels."""
    r1 = _R_MOD % prime.p
    ninv = (-pow(prime.p, -1, _R_MOD)) % _R_MOD
    return r1, ninv


@lru_cache(maxsize=256)
def _twiddles(p: int, generator: int, size: int) -> tuple[np.ndarray, np.ndarray]:
    """Forward/inverse twiddle tables for one transform length, in 2^64-scaled
    form; entry i is w^i (resp. w^-i) for the order-`size` root w."""
    if size == 1:
        empty = np.zeros(0, dtype=np.uint64)
        return empty, empty
    if (p - 1) % size:
        raise RootOrderError(f"order unavailable: {size} does not divide p - 1")
    w = pow(generator, (p - 1) // size, p)
    winv = pow(w, p - 2, p)
    r1 = _R_MOD % p
    half = size // 2
    fwd = np.empty(half, dtype=np.uint64)
    inv = np.empty(half, dtype=np.uint64)
    cur_f = cur_i = r1
    for i in range(half):
        fwd[i] = cur_f
        inv[i] = cur_i
        cur_f = cur_f * w % p
        cur_i = cur_i * winv % p
    return fwd, inv


@dataclass(frozen=True)
class RootTable:
    """Roots of unity and twiddle tables for one prime at one plan shape."""

    prime: PrimeSpec
    omega: int                      # order-K root, omega = theta^2
    theta: int                      # order-2K root used by the negacyclic twist
    theta_powers: tuple[int, ...]   # theta^j, j < K
    theta_inv_powers: tuple[int, ...]
    forward: dict = field(repr=False)       # length -> 2^64-scaled twiddles
    inverse: dict = field(repr=False)
    ninv: int = field(repr=False, default=0)        # -p^-1 mod 2^64
    twist_in: np.ndarray = field(repr=False, default=None)
    scale_cyclic: np.ndarray = field(repr=False, default=None)
    scale_negacyclic: np.ndarray = field(repr=False, default=None)


@lru_cache(maxsize=64)
def root_table(prime: PrimeSpec, K: int, s_y: int) -> RootTable:
    p = prime.p
    theta = primitive_root_of_order(2 * K, prime)
    omega = theta * theta % p
    theta_pows = [1] * K
    theta_inv_pows = [1] * K
    tinv = pow(theta, p - 2, p)
    for j in range(1, K):
        theta_pows[j] = theta_pows[j - 1] * theta % p
        theta_inv_pows[j] = theta_inv_pows[j - 1] * tinv % p
    r1, ninv = mont_constants(prime)
    fwd_tabs = {L: _twiddles(p, prime.generator, L)[0] for L in {K, s_y}}
    inv_tabs = {L: _twiddles(p, prime.generator, L)[1] for L in {K, s_y}}
    inv_lk = pow(s_y % p * K % p, p - 2, p)
    r2 = r1 * r1 % p
    twist_in = np.array([t * r1 % p for t in theta_pows], dtype=np.uint64)
    scale_cyc = np.full(K, inv_lk * r2 % p, dtype=np.uint64)
    scale_neg = np.array(
        [inv_lk * tj % p * r2 % p for tj in theta_inv_pows], dtype=np.uint64
    )
    return RootTable(
        prime=prime,
        omega=omega,
        theta=theta,
        theta_powers=tuple(theta_pows),
        theta_inv_powers=tuple(theta_inv_pows),
        forward=fwd_tabs,
        inverse=inv_tabs,
        ninv=ninv,
        twist_in=twist_in,
        scale_cyclic=scale_cyc,
        scale_negacyclic=scale_neg,
    )
