"""Exception types shared across the package.

Numerical failures (divergence, bracketing, degenerate inputs) derive from
:class:`NumericalError`; configuration failures derive from
:class:`ConfigError`.  The CLI maps the former to exit code 2 and the latter
to exit code 1.
"""


class DexlabError(Exception):
    """Base class for all package-specific errors."""


class NumericalError(DexlabError):
    """A computation could not be completed reliably."""


class ConfigError(DexlabError):
    """Invalid run configuration."""


# geometry / alignment -------------------------------------------------------

class NonUnitQuaternion(NumericalError):
    pass


class DimensionMismatch(NumericalError):
    pass


class DegenerateSample(NumericalError):
    pass


class RatioTooSmall(NumericalError):
    """Outer/inner radius ratio too small for the requested angle budget."""


class EmptyInput(NumericalError):
    pass


class CoincidentSourcePoints(NumericalError):
    pass


class TooFewPoints(NumericalError):
    pass


# jets ------------------------------------------------------------------------

class IndexOutOfRange(NumericalError):
    pass


# orthogonal polynomials / expansions -----------------------------------------

class NoConvergence(NumericalError):
    pass


class DegreeOutOfRange(NumericalError):
    pass


class BracketFailure(NumericalError):
    pass


class IntegrationDivergence(NumericalError):
    pass


class NonFinite(NumericalError):
    pass


class InvalidExponent(NumericalError):
    pass


class NegativeArgument(NumericalError):
    pass


# configuration ----------------------------------------------------------------

class UnknownKey(ConfigError):
    def __init__(self, key: str):
        super().__init__(f"unknown key: {key!r}")
        self.key = key


class MissingRequired(ConfigError):
    def __init__(self, key: str):
        super().__init__(f"missing required key: {key!r}")
        self.key = key


class TypeMismatch(ConfigError):
    def __init__(self, key: str, expected: str, got: str):
        super().__init__(f"key {key!r}: expected {expected}, got {got!r}")
        self.key = key
