"""Dense integer polynomial multiplication via two bivariate convolutions.

Coefficients are split into balanced power-of-two digits, the resulting digit
grids are multiplied modulo x^K - 1 and x^K + 1 with row-column 2-D
number-theoretic transforms over word-size primes, residues are recombined by
the Chinese Remainder Theorem, and the product is recovered with exact shift
and add operations.
"""

from .bench import BenchConfig, generate_random_dense, run_benchmark
from .codec import DigitMatrix, bivariate_representation, recover_product
from .multiplier import MulRequest, StageTimings, multiply, multiply_with_stats
from .oracle import kronecker_multiply, schoolbook_multiply
from .params import (
    FermatPrimeEntry,
    MulPlan,
    PrimeSpec,
    build_plan,
    determine_base,
    fermat_prime_table,
    fourier_prime_table,
    recovery_primes,
)
from .zpoly import IntPolynomial, WideInt, format_polynomial, parse_polynomial

__version__ = "0.1.0"

__all__ = [
    "BenchConfig",
    "DigitMatrix",
    "FermatPrimeEntry",
    "IntPolynomial",
    "MulPlan",
    "MulRequest",
    "PrimeSpec",
    "StageTimings",
    "WideInt",
    "bivariate_representation",
    "build_plan",
    "determine_base",
    "fermat_prime_table",
    "format_polynomial",
    "fourier_prime_table",
    "generate_random_dense",
    "kronecker_multiply",
    "multiply",
    "multiply_with_stats",
    "parse_polynomial",
    "recover_product",
    "recovery_primes",
    "run_benchmark",
    "schoolbook_multiply",
    "__version__",
]
