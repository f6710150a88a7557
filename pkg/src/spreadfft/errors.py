"""Exception hierarchy shared by every module of the package."""


class SpreadFFTError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SpreadFFTError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """A gamma-function argument sits on (or next to) a pole."""


class RangeError(SpreadFFTError, ArithmeticError):
    """A result overflows double precision or lies outside a trusted range."""


class ContourError(DomainError):
    """The contour shift is not admissible for the payoff or the model."""


class BranchError(SpreadFFTError, ArithmeticError):
    """A complex logarithm jumps between lattice neighbours; refine the lattice."""


class ResidueError(SpreadFFTError, ArithmeticError):
    """A price panel carries an imaginary residue that is too large."""


class UnsupportedGreek(SpreadFFTError, NotImplementedError):
    """No closed-form Greek multiplier exists for this model."""


class ExtrapolationError(DomainError):
    """A requested strike lies outside the sampled diagonal of a panel."""


class MemoryBudgetError(SpreadFFTError, MemoryError):
    """A lattice would exceed the configured memory budget."""


class QuadratureError(SpreadFFTError, ArithmeticError):
    """Adaptive quadrature did not reach its tolerance."""


class ConfigError(DomainError):
    """A run configuration failed validation."""
