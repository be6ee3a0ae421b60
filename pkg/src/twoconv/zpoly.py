"""Dense integer polynomials stored as fixed-width two's-complement words.

Coefficient i of an ``IntPolynomial`` occupies word positions
[i * coeff_words, (i + 1) * coeff_words), little-endian, sign-extended to the
full word span.  ``WideInt`` is the fixed-width accumulator used when the
product is recovered by shift-and-add.
"""

from __future__ import annotations

import numpy as np

from .errors import ParityError, PolynomialParseError
from .params import twos_complement_width

WORD_BITS = 64
_WORD_MASK = (1 << WORD_BITS) - 1


def _words_from_int(value: int, nwords: int) -> np.ndarray:
    enc = value & ((1 << (WORD_BITS * nwords)) - 1)
    raw = enc.to_bytes(8 * nwords, "little")
    return np.frombuffer(raw, dtype=np.uint64).copy()


def _int_from_words(words: np.ndarray) -> int:
    u = int.from_bytes(words.tobytes(), "little")
    top_bit = 1 << (WORD_BITS * len(words) - 1)
    return u - (top_bit << 1) if u & top_bit else u


class IntPolynomial:
    """Dense polynomial over Z; index = degree, ascending."""

    __slots__ = ("bit_width", "words")

    def __init__(self, words: np.ndarray, bit_width: int):
        if words.ndim != 2 or words.dtype != np.uint64 or words.shape[0] < 1:
            raise ValueError("words must be a (d, coeff_words) uint64 array")
        if bit_width < 1 or words.shape[1] != -(-bit_width // WORD_BITS):
            raise ValueError("coeff_words does not match the declared bit width")
        self.bit_width = bit_width
        self.words = np.ascontiguousarray(words)
        lo, hi = -(1 << (bit_width - 1)), (1 << (bit_width - 1)) - 1
        for i in range(words.shape[0]):
            c = _int_from_words(self.words[i])
            if not lo <= c <= hi:
                raise ValueError(f"coefficient {i} does not fit {bit_width} bits")

    @classmethod
    def from_coefficients(cls, coeffs, bit_width: int | None = None) -> "IntPolynomial":
        coeffs = [int(c) for c in coeffs]
        if not coeffs:
            raise ValueError("a polynomial needs at least one coefficient")
        if bit_width is None:
            bit_width = max(twos_complement_width(c) for c in coeffs)
        nwords = -(-bit_width // WORD_BITS)
        words = np.empty((len(coeffs), nwords), dtype=np.uint64)
        for i, c in enumerate(coeffs):
            words[i] = _words_from_int(c, nwords)
        return cls(words, bit_width)

    @property
    def degree_plus_one(self) -> int:
        return self.words.shape[0]

    @property
    def coeff_words(self) -> int:
        return self.words.shape[1]

    def coefficient(self, i: int) -> int:
        return _int_from_words(self.words[i])

    def coefficients(self) -> list[int]:
        return [self.coefficient(i) for i in range(self.degree_plus_one)]

    def is_zero(self) -> bool:
        return not self.words.any()

    def min_coefficient(self) -> int:
        return min(self.coefficients())

    def max_coefficient(self) -> int:
        return max(self.coefficients())

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        return (
            self.bit_width == other.bit_width
            and self.words.shape == other.words.shape
            and bool(np.array_equal(self.words, other.words))
        )

    def __hash__(self):
        return hash((self.bit_width, self.words.tobytes()))

    def __repr__(self):
        d = self.degree_plus_one
        return f"IntPolynomial(d={d}, bits={self.bit_width})"


def product_bit_width(a: IntPolynomial, b: IntPolynomial) -> int:
    """Two's-complement width holding every product coefficient, from the
    tight bound |c_i| <= d * 2^(2N-2)."""
    n_in = max(
        twos_complement_width(a.min_coefficient()),
        twos_complement_width(a.max_coefficient()),
        twos_complement_width(b.min_coefficient()),
        twos_complement_width(b.max_coefficient()),
    )
    d = max(a.degree_plus_one, b.degree_plus_one)
    bound = d << max(2 * n_in - 2, 0)
    return bound.bit_length() + 1


def parse_polynomial(text) -> IntPolynomial:
    """Read the text format: header ``d=<count>``, then one signed decimal
    coefficient per line, degree ascending."""
    if isinstance(text, bytes):
        text = text.decode("ascii")
    lines = text.splitlines()
    if not lines or not lines[0].startswith("d="):
        raise PolynomialParseError("expected header 'd=<count>'", line=1)
    try:
        d = int(lines[0][2:])
    except ValueError:
        raise PolynomialParseError("malformed degree count", line=1) from None
    if d < 1:
        raise PolynomialParseError("degree count must be positive", line=1)
    body = lines[1:]
    if len(body) < d:
        raise PolynomialParseError(f"expected {d} coefficient lines, found {len(body)}")
    if any(s.strip() for s in body[d:]):
        raise PolynomialParseError("trailing data after last coefficient", line=d + 2)
    coeffs = []
    for idx, raw in enumerate(body[:d]):
        try:
            coeffs.append(int(raw.strip()))
        except ValueError:
            raise PolynomialParseError(f"not an integer: {raw.strip()!r}", line=idx + 2) from None
    return IntPolynomial.from_coefficients(coeffs)


def format_polynomial(poly: IntPolynomial) -> str:
    out = [f"d={poly.degree_plus_one}"]
    out.extend(str(c) for c in poly.coefficients())
    return "\n".join(out) + "\n"


class WideInt:
    """Fixed-width little-endian two's-complement word vector."""

    __slots__ = ("words",)

    def __init__(self, words):
        self.words = list(words)
        if not self.words:
            raise ValueError("WideInt needs at least one word")

    @classmethod
    def zeros(cls, nwords: int) -> "WideInt":
        return cls([0] * nwords)

    @classmethod
    def from_int(cls, value: int, nwords: int) -> "WideInt":
        if twos_complement_width(value) > nwords * WORD_BITS:
            raise ValueError(f"{value} does not fit {nwords} words")
        enc = value & ((1 << (WORD_BITS * nwords)) - 1)
        return cls([(enc >> (WORD_BITS * i)) & _WORD_MASK for i in range(nwords)])

    @property
    def bit_capacity(self) -> int:
        return len(self.words) * WORD_BITS

    def to_int(self) -> int:
        u = 0
        for i, w in enumerate(self.words):
            u |= w << (WORD_BITS * i)
        top = 1 << (self.bit_capacity - 1)
        return u - (top << 1) if u & top else u

    def __eq__(self, other):
        return isinstance(other, WideInt) and self.words == other.words

    def __repr__(self):
        return f"WideInt({self.to_int()}, words={len(self.words)})"


def wide_add_shifted(acc: WideInt, value: WideInt, shift: int, sign: int = 1) -> WideInt:
    """acc + sign * (value << shift), exact over acc's two's-complement span.

    Plans size accumulators so the true result always fits; the assertion
    records that bound.
    """
    assert sign in (1, -1)
    assert shift >= 0 and shift + value.bit_capacity <= acc.bit_capacity, \
        "shifted addend exceeds accumulator capacity"
    n = len(acc.words)
    q, r = divmod(shift, WORD_BITS)
    vsign = _WORD_MASK if value.words[-1] >> (WORD_BITS - 1) else 0
    # Addend words of (value << shift), sign-extended across the accumulator.
    addend = [0] * n
    prev = 0
    for t, cur in enumerate(value.words):
        if q + t >= n:
            break
        spill = (prev >> (WORD_BITS - r)) if r else 0
        addend[q + t] = ((cur << r) | spill) & _WORD_MASK
        prev = cur
    tail = q + len(value.words)
    if tail < n:
        spill = (prev >> (WORD_BITS - r)) if r else 0
        addend[tail] = ((vsign << r) | spill) & _WORD_MASK
        for t in range(tail + 1, n):
            addend[t] = vsign
    out = [0] * n
    carry = 1 if sign < 0 else 0
    for t in range(n):
        av = addend[t] ^ _WORD_MASK if sign < 0 else addend[t]
        s = acc.words[t] + av + carry
        out[t] = s & _WORD_MASK
        carry = s >> WORD_BITS
    return WideInt(out)


def wide_halve(x: WideInt) -> WideInt:
    """Exact arithmetic right shift by one; the input must be even."""
    if x.words[0] & 1:
        raise ParityError("parity violation: cannot halve an odd value exactly")
    n = len(x.words)
    out = [0] * n
    for t in range(n - 1):
        out[t] = ((x.words[t] >> 1) | ((x.words[t + 1] & 1) << (WORD_BITS - 1))) & _WORD_MASK
    top = x.words[n - 1]
    out[n - 1] = (top >> 1) | (top & (1 << (WORD_BITS - 1)))
    return WideInt(out)
