"""Exception hierarchy."""


class QuantumnessError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(QuantumnessError, ValueError):
    pass


class ResourceCapExceeded(QuantumnessError, MemoryError):
    """Requested Hilbert-space dimension is above the configured cap."""


class NotHermitianError(QuantumnessError, ValueError):
    pass


class InvalidStateError(QuantumnessError, ValueError):
    pass


class SolverError(QuantumnessError, RuntimeError):
    """An eigensolver or root finder failed to converge."""


class BracketError(QuantumnessError, ValueError):
    """No sign change of the smallest witness eigenvalue on the search interval."""


class RankDeficientError(QuantumnessError, ValueError):
    pass


class TargetUnreachable(QuantumnessError, ValueError):
    """The fitted model never drops below the requested critical value."""


class IllConditionedWarning(UserWarning):
    """Spectrum reconstruction from power sums lost accuracy."""


class ImaginaryResidueError(QuantumnessError, ArithmeticError):
    """A quantity that must be real came out with a non-negligible imaginary part."""
