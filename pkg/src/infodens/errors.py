"""Exception hierarchy shared by all modules."""


class InfodensError(Exception):
    """Base class; carries the ``module.operation`` that failed."""

    def __init__(self, where: str, message: str):
        self.where = where
        super().__init__(f"{where}: {message}")


class InputError(InfodensError):
    """Rejected input or configuration (CLI exit code 1)."""


class CapacityError(InputError):
    """Not enough bound states to hold the requested particle number."""


class FitError(InputError):
    pass


class SolverError(InfodensError):
    """Numerical procedure failed to converge (CLI exit code 2)."""


class TruncationError(SolverError):
    """Radial box too small: the function has not decayed at r_max."""


class TransformAccuracyError(SolverError):
    pass


class DegenerateMeasureError(SolverError):
    """Density is numerically indistinguishable from its uniform surrogate."""
