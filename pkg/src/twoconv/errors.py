"""Exception types shared across the library."""


class EmptyInputError(ValueError):
    """An operation received a zero polynomial, whose degree is undefined."""


class EncodingError(ValueError):
    """A coefficient does not fit the digit capacity of the given plan."""


class TransformLengthError(ValueError):
    """No stored prime has a large enough power-of-two subgroup."""


class PrimeCapacityError(ValueError):
    """The coefficient bound exceeds what the configured primes can recover."""


class RootOrderError(ValueError):
    """The requested root-of-unity order does not divide p - 1."""


class ParityError(ValueError):
    """An exact halving met an odd value."""


class CorruptedConvolutionError(RuntimeError):
    """Convolution output failed an internal consistency check."""


class BenchMismatchError(RuntimeError):
    """Two multiplication algorithms disagreed on a benchmark input."""

    def __init__(self, message, report=""):
        super().__init__(message)
        self.report = report


class PolynomialParseError(ValueError):
    """Input text does not conform to the polynomial file format."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
