"""Exception types shared across the toolkit."""


class OverdetError(Exception):
    """Base class for every error raised by this package."""


class PolynomialParseError(OverdetError):
    """Polynomial or system text could not be parsed."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f" (line {line})" if column is None else f" (line {line}, column {column})"
        super().__init__(message + where)
        self.line = line
        self.column = column


class MissingAssignmentError(OverdetError):
    """Evaluation point does not assign a value to a required variable."""

    def __init__(self, variable: str):
        super().__init__(f"no value assigned to variable '{variable}'")
        self.variable = variable


class DegreeMismatchError(OverdetError):
    """Pair reduction requires both members to have the same positive degree."""


class ZeroLeadingCoefficientError(OverdetError):
    """The leading coefficient that the reduction divides through is identically zero."""


class NotUnivariateError(OverdetError):
    """Operation requires nonzero univariate polynomials with constant coefficients."""


class AllDegreeZeroError(OverdetError):
    """No equation of the system involves the variable being eliminated."""


class PivotDegenerateError(OverdetError):
    """No usable pivot equation remains for the elimination step."""


class SystemShapeError(OverdetError):
    """Equation/variable counts do not match the required shape."""


class IndexRangeError(OverdetError):
    """A multi-index or encoded index lies outside the codec's valid range."""


class NotASolutionError(OverdetError):
    """Certification was asked for a point that violates the system."""

    def __init__(self, equation_index: int, value):
        super().__init__(
            f"point is not a solution: equation {equation_index} evaluates to {value}"
        )
        self.equation_index = equation_index
        self.value = value


class InfeasibleOrdersError(OverdetError):
    """No prolongation order vector within the search cap meets the count constraint."""


class UndefinedResultantError(OverdetError):
    """Resultant of two polynomials both constant in the elimination variable."""
