"""Exception hierarchy shared by all modules."""


class NegentropyError(Exception):
    """Base class for every error raised by this package."""


class InvalidStateError(NegentropyError, ValueError):
    """An operator violates the density-operator or pure-state invariants."""


class AddressingError(NegentropyError, KeyError):
    """A register block name is unknown or a block is addressed inconsistently."""

    def __str__(self) -> str:  # KeyError quotes its message otherwise
        return str(self.args[0]) if self.args else ""


class DimensionError(NegentropyError, ValueError):
    """Operands have incompatible dimensions."""


class CapacityError(NegentropyError):
    """A request exceeds the dense-matrix capacity of the library."""


class SolverError(NegentropyError):
    """A convex solve failed to reach its target gap.

    Attributes:
        residuals: diagnostic numbers from the last iterate.
    """

    def __init__(self, message: str, residuals: dict | None = None):
        super().__init__(message)
        self.residuals = dict(residuals or {})


class InfeasibleError(NegentropyError, ValueError):
    """A parameter combination has no admissible solution (e.g. 2*delta' <= 12*eps)."""
