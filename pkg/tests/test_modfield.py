import random

import numpy as np
import pytest

from twoconv import _kernels as k
from twoconv.errors import RootOrderError
from twoconv.modfield import (
    crt_combine,
    lift_symmetric,
    mod_mul,
    mont_constants,
    primitive_root_of_order,
    root_table,
)
from twoconv.params import PrimeSpec, fourier_prime_table

P17 = PrimeSpec(p=17, q=1, k=4, generator=3)
P5 = PrimeSpec(p=5, q=1, k=2, generator=2)
P7 = PrimeSpec(p=7, q=3, k=1, generator=3)


def test_mod_mul_examples():
    assert mod_mul(3, 4, P17) == 12
    assert mod_mul(16, 16, P17) == 1  # (-1)^2


def test_compiled_montgomery_matches_bigint_oracle():
    # The compiled reduction is the only nontrivial multiply in the pipeline;
    # compare it against plain big-integer arithmetic.
    rng = random.Random(99)
    for spec in fourier_prime_table()[:2]:
        p = spec.p
        r1, ninv = mont_constants(spec)
        pu, nu = np.uint64(p), np.uint64(ninv)
        for _ in range(5000):
            a = rng.randrange(p)
            b = rng.randrange(p)
            bm = b * r1 % p  # table entries carry the 2^64 factor
            got = k.mont_mul_probe(np.uint64(a), np.uint64(bm), pu, nu)
            assert int(got) == a * b % p


def test_primitive_root_of_order():
    assert primitive_root_of_order(2, P17) == 16  # the unique element of order 2
    g = primitive_root_of_order(4, P17)
    assert g == pow(3, 4, 17) == 13
    assert pow(g, 2, 17) == 16
    assert primitive_root_of_order(1, P17) == 1
    with pytest.raises(RootOrderError):
        primitive_root_of_order(3, P17)
    with pytest.raises(RootOrderError):
        primitive_root_of_order(32, P17)


def test_primitive_root_orders_on_table_primes():
    # Every table prime, every power-of-two order up to its full 2-adic part.
    for spec in fourier_prime_table():
        for logn in range(1, spec.k + 1):
            n = 1 << logn
            g = primitive_root_of_order(n, spec)
            assert pow(g, n, spec.p) == 1
            assert pow(g, n // 2, spec.p) == spec.p - 1


def test_lift_symmetric():
    assert lift_symmetric(1, P17) == 1
    assert lift_symmetric(16, P17) == -1
    assert lift_symmetric(9, P17) == -8
    assert lift_symmetric(8, P17) == 8
    p = fourier_prime_table()[0]
    for x in (0, 1, (p.p - 1) // 2, -(p.p - 1) // 2, 12345, -98765):
        assert lift_symmetric(x % p.p, p) == x


def test_crt_combine_examples():
    assert crt_combine([2, 3], [P5, P7]).to_int() == 17
    assert crt_combine([0, 0], [P5, P7]).to_int() == 0
    assert crt_combine([4, 6], [P5, P7]).to_int() == -1
    with pytest.raises(ValueError, match="not coprime"):
        crt_combine([1, 2], [P5, P5])


def test_crt_round_trip_randomized():
    rng = random.Random(5)
    specs = fourier_prime_table()[:3]
    for _ in range(10_000):
        count = rng.randint(1, 3)
        chosen = specs[:count]
        residues = [rng.randrange(s.p) for s in chosen]
        x = crt_combine(residues, chosen).to_int()
        prod = 1
        for s in chosen:
            prod *= s.p
        assert abs(x) <= (prod - 1) // 2
        for r, s in zip(residues, chosen):
            assert x % s.p == r


def test_field_axioms_sampled():
    rng = random.Random(3)
    for spec in fourier_prime_table()[:2]:
        p = spec.p
        for _ in range(5000):
            a, b, c = (rng.randrange(p) for _ in range(3))
            assert mod_mul(a, b, spec) == mod_mul(b, a, spec)
            assert mod_mul(mod_mul(a, b, spec), c, spec) == mod_mul(a, mod_mul(b, c, spec), spec)
            assert mod_mul(a, (b + c) % p, spec) == (mod_mul(a, b, spec) + mod_mul(a, c, spec)) % p
            if a:
                inv = pow(a, p - 2, p)
                assert mod_mul(a, inv, spec) == 1


def test_root_table_relations():
    spec = fourier_prime_table()[0]
    K, s_y = 8, 16
    table = root_table(spec, K, s_y)
    p = spec.p
    assert pow(table.theta, 2 * K, p) == 1
    assert pow(table.theta, K, p) == p - 1
    assert table.omega == table.theta * table.theta % p
    assert pow(table.omega, K, p) == 1
    for j in range(K):
        assert table.theta_powers[j] == pow(table.theta, j, p)
        assert table.theta_inv_powers[j] == pow(table.theta, -j, p)
