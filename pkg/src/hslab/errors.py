"""Exception and warning types raised by hslab."""


class RangeError(ValueError):
    """A parameter lies outside its admissible interval."""


class TailTruncationError(ValueError):
    """The grid is too narrow to resolve the tails of a profile."""

    def __init__(self, message, required_half_width=None):
        super().__init__(message)
        self.required_half_width = required_half_width


class GridMismatchError(ValueError):
    """Two fields live on different grids or parameter sets."""


class DegenerateQuotientError(ArithmeticError):
    """The field sits on (or numerically next to) the extremizer manifold."""


class MissingRadialConstantError(ValueError):
    """gamma_0 for N >= 4 needs an estimate of the radial constant."""


class ConvergenceError(RuntimeError):
    """An iterative procedure failed to produce a usable result."""


class BracketEscapeWarning(RuntimeWarning):
    """A supremum was attained at the edge of the search window."""


class UnderflowWarning(RuntimeWarning):
    """An interaction integral fell below double-precision usefulness."""
