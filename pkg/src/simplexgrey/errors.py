"""Exception hierarchy.

Three families map onto CLI exit codes: configuration problems (2), bad input
data (3) and numerical degeneracy (4).
"""


class SimplexGreyError(Exception):
    exit_code = 1


class ConfigError(SimplexGreyError, ValueError):
    exit_code = 2


class DataError(SimplexGreyError, ValueError):
    exit_code = 3


class NumericalError(SimplexGreyError, ArithmeticError):
    exit_code = 4


class BadSplit(ConfigError):
    pass


class LengthMismatch(ConfigError):
    pass


class NonPositivePart(DataError):
    pass


class DegenerateDimension(DataError):
    pass


class DimensionMismatch(DataError):
    pass


class UnmappedSource(DataError):
    pass


class EmptyColumn(DataError):
    pass


class DegenerateSeries(NumericalError):
    """The centralized series carries no variation (constant composition)."""


class SingularMatrix(NumericalError):
    pass


class SingularNormalEquations(NumericalError):
    pass


class ZeroReference(NumericalError):
    """Reference series is uniform, so relative errors are undefined."""


class AllCoordinatesSkipped(NumericalError):
    pass


class BothErrorsZero(UserWarning):
    """Both fitting errors vanished; fusion falls back to the GADGMSS series."""
