#!/usr/bin/env python3
"""Regenerate src/twoconv/data/fourier_primes.txt.

Collects, for each k in 32..57, the eight largest primes p = q*2^k + 1 with q
odd and p in (2^62, 2^63), finds a primitive root for each, and writes them
sorted by descending p.  Every entry is independently re-checked by the test
suite; this script only needs to run when the table layout changes.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from twoconv.params import PrimeSpec, _odd_prime_factors, is_prime_u64  # noqa: E402

K_RANGE = range(32, 58)
PER_K = 8
HEADER = """\
# fourier-primes v1
# Primes p = q*2^k + 1 (q odd) in (2^62, 2^63), largest eight per k for k in 32..57,
# each with a verified primitive root of Z/p. Fields: p q k generator
"""


def primitive_root_for(p: int, q: int) -> int:
    factors = {2} | _odd_prime_factors(q)
    g = 2
    while True:
        if all(pow(g, (p - 1) // r, p) != 1 for r in factors):
            return g
        g += 1


def collect() -> list[PrimeSpec]:
    found = []
    for k in K_RANGE:
        qmax = ((1 << 63) - 2) >> k
        if qmax % 2 == 0:
            qmax -= 1
        hits = 0
        q = qmax
        while q > 0 and hits < PER_K:
            p = (q << k) + 1
            if p > (1 << 62) and is_prime_u64(p):
                found.append(PrimeSpec(p=p, q=q, k=k, generator=primitive_root_for(p, q)))
                hits += 1
            q -= 2
    return sorted(found, key=lambda s: s.p, reverse=True)


def main() -> int:
    out = Path(__file__).resolve().parents[1] / "src" / "twoconv" / "data" / "fourier_primes.txt"
    specs = collect()
    with open(out, "w") as handle:
        handle.write(HEADER)
        for s in specs:
            handle.write(f"{s.p} {s.q} {s.k} {s.generator}\n")
    print(f"wrote {len(specs)} primes to {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
