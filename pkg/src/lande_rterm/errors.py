"""Exception types shared across the package."""


class IrrationalResult(ArithmeticError):
    """A quantity that must be rational turned out not to be."""


class InvalidCoupling(ValueError):
    """Quantum numbers violate the triangle rule."""


class DegenerateGrid(ValueError):
    """Sample points do not span enough distinct values to fit."""


class DegenerateMetric(ArithmeticError):
    """The inverse metric is singular or not positive definite."""


class StepTooLarge(ValueError):
    """A finite-difference stencil would cross a coordinate singularity."""


class InsufficientLevels(ValueError):
    """Too few levels in a multiplet for the requested analysis."""


class SingularDesign(ArithmeticError):
    """The least-squares design matrix is rank deficient."""

    def __init__(self, message, diagnostic=None):
        super().__init__(message)
        self.diagnostic = diagnostic or {}


class LevelsParseError(ValueError):
    """A levels file could not be parsed; carries the row and column."""

    def __init__(self, message, row=None, column=None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.row = row
        self.column = column
