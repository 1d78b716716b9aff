"""Exception types raised by the library.

Invalid parameters are caller bugs and raise subclasses of ``ValueError``;
numerical failures raise subclasses of ``ArithmeticError`` so the CLI can map
them to distinct exit codes.
"""


class InvalidSpecError(ValueError):
    """Amplifier or state parameters violate their invariants."""


class GridError(ValueError):
    """A sampling grid is malformed, too coarse, or does not cover the support."""


class CoverageError(GridError):
    pass


class ResolutionError(GridError):
    pass


class QuadratureError(ArithmeticError):
    """A quadrature did not reach the requested tolerance."""


class ConvergenceError(ArithmeticError):
    """A grid-refinement or root-bracketing check failed."""


class TruncationError(ArithmeticError):
    """A truncated number-basis representation lost too much trace."""


class ZeroProbabilityError(ArithmeticError):
    """A projection outcome has (numerically) zero probability."""
