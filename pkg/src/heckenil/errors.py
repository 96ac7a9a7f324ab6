"""Exception types shared across the package."""


class HeckeNilError(Exception):
    """Base class for all package errors."""


class ModulusMismatch(HeckeNilError, ValueError):
    """Two series over different prime fields were combined."""


class PrecisionError(HeckeNilError, ValueError):
    """Not enough known coefficients for the requested operation."""


class HypothesisError(HeckeNilError, ValueError):
    """A parameter choice violates the hypothesis of the statement being checked."""


class ResidualNonzero(HeckeNilError, ArithmeticError):
    """A q-expansion failed to lie in the claimed polynomial span."""


class CeilingExceeded(HeckeNilError, RuntimeError):
    """Hecke iteration did not reach zero within the configured ceiling."""


class BoundViolated(HeckeNilError, RuntimeError):
    """A computed nilpotency index exceeds a proven bound."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
