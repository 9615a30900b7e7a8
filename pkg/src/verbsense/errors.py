"""Exception types shared across the package.

Every error raised on purpose derives from VerbsenseError so callers can
catch package failures with a single except clause (the CLI maps them to
exit code 1).
"""


class VerbsenseError(Exception):
    pass


class FormatError(VerbsenseError):
    """Malformed input file: parse failure, bad magic, schema violation.

    Messages carry line/field context where available.
    """


class UnknownVerbError(VerbsenseError):
    """Verb not present in the sense inventory."""


class MissingKeyError(VerbsenseError):
    """Lookup key absent from a feature store or sense-image manifest."""


class MissingResourceError(VerbsenseError):
    """A resource required by the requested configuration was not supplied."""


class NoCoverageError(VerbsenseError):
    """No in-vocabulary content tokens were available to build a text vector."""


class ZeroNormError(VerbsenseError):
    """A vector that must be length-normalized has zero norm."""


class DimensionMismatchError(VerbsenseError):
    """Vector or matrix dimensions are inconsistent for the operation."""


class NonFiniteError(VerbsenseError):
    """Input contains NaN or infinite values."""


class InsufficientDataError(VerbsenseError):
    """Not enough data for the operation (pairs, classes, annotations...)."""


class WhiteningError(VerbsenseError):
    """A within-view covariance is not positive definite even after ridge."""
