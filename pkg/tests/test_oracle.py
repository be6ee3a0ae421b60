import random

import numpy as np
import pytest

from twoconv.codec import DigitMatrix
from twoconv.errors import EmptyInputError
from twoconv.oracle import (
    kronecker_multiply,
    naive_bivariate_convolution,
    schoolbook_multiply,
)
from twoconv.zpoly import IntPolynomial


def _poly(coeffs, width=None):
    return IntPolynomial.from_coefficients(coeffs, bit_width=width)


def test_schoolbook_examples():
    assert schoolbook_multiply(_poly([1, 1]), _poly([1, 1])).coefficients() == [1, 2, 1]
    assert schoolbook_multiply(_poly([2]), _poly([3])).coefficients() == [6]
    ones = _poly([1, 1, 1, 1])
    assert schoolbook_multiply(ones, ones).coefficients() == [1, 2, 3, 4, 3, 2, 1]


def test_schoolbook_rejects_zero():
    with pytest.raises(EmptyInputError):
        schoolbook_multiply(_poly([0]), _poly([1]))


def test_kronecker_sign_paths():
    assert kronecker_multiply(_poly([-1]), _poly([-1])).coefficients() == [1]
    assert kronecker_multiply(_poly([1, 1]), _poly([1, -1])).coefficients() == [1, 0, -1]


def test_kronecker_matches_schoolbook_randomized():
    rng = random.Random(271828)
    for _ in range(60):
        da, db = rng.randint(1, 80), rng.randint(1, 80)
        nbits = rng.randint(1, 256)
        lo, hi = -(1 << (nbits - 1)), (1 << (nbits - 1)) - 1
        ca = [rng.randint(lo, hi) for _ in range(da)]
        cb = [rng.randint(lo, hi) for _ in range(db)]
        if not any(ca):
            ca[0] = hi or 1
        if not any(cb):
            cb[0] = lo
        a, b = _poly(ca, nbits), _poly(cb, nbits)
        assert kronecker_multiply(a, b) == schoolbook_multiply(a, b)


def test_oracles_produce_bitwise_identical_outputs():
    a = _poly([3, -5, 9], 8)
    b = _poly([-2, 7], 8)
    x, y = schoolbook_multiply(a, b), kronecker_multiply(a, b)
    assert x == y and x.bit_width == y.bit_width


def _mat(rows):
    arr = np.array(rows, dtype=np.int64)
    return DigitMatrix(d=arr.shape[0], K=arr.shape[1], M=8, digits=arr)


def test_naive_bivariate_examples():
    delta = _mat([[1, 0]])
    out = naive_bivariate_convolution(delta, delta, fold="none")
    assert out == [[1, 0, 0]]

    a = _mat([[1, 2]])
    b = _mat([[3, 4]])
    assert naive_bivariate_convolution(a, b, fold="none") == [[3, 10, 8]]
    assert naive_bivariate_convolution(a, b, fold="cyclic") == [[11, 10]]
    assert naive_bivariate_convolution(a, b, fold="negacyclic") == [[-5, 10]]


def test_naive_bivariate_fold_consistency():
    rng = random.Random(55)
    for _ in range(25):
        d, K = rng.randint(1, 5), rng.choice([2, 4, 8])
        rows_a = [[rng.randint(-100, 100) for _ in range(K)] for _ in range(d)]
        rows_b = [[rng.randint(-100, 100) for _ in range(K)] for _ in range(d)]
        a, b = _mat(rows_a), _mat(rows_b)
        full = naive_bivariate_convolution(a, b, fold="none")
        cyc = naive_bivariate_convolution(a, b, fold="cyclic")
        neg = naive_bivariate_convolution(a, b, fold="negacyclic")
        for row_full, row_c, row_n in zip(full, cyc, neg):
            padded = row_full + [0]
            assert row_c == [padded[j] + padded[j + K] for j in range(K)]
            assert row_n == [padded[j] - padded[j + K] for j in range(K)]


def test_naive_bivariate_guard():
    big = _mat([[0] * 32])
    with pytest.raises(ValueError, match="capped"):
        naive_bivariate_convolution(big, big)
    with pytest.raises(ValueError):
        naive_bivariate_convolution(_mat([[1, 2]]), _mat([[1, 2]]), fold="spiral")
