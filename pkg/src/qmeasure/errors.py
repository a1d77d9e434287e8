"""Exception hierarchy.

Everything raised on bad input derives from :class:`QuantumOpsError`, which is
itself a ``ValueError`` so callers that only care about "bad argument" can
catch that.
"""


class QuantumOpsError(ValueError):
    pass


class ShapeError(QuantumOpsError):
    """Operand shapes or subsystem dimensions do not match."""


class SizeError(ShapeError):
    """A result would exceed the dense-matrix size cap."""


class SymmetryError(QuantumOpsError):
    """Matrix is not Hermitian within tolerance."""


class NormalizationError(QuantumOpsError):
    """State vector or density operator does not have unit norm/trace."""


class PositivityError(QuantumOpsError):
    """Operator has an eigenvalue below the positivity floor."""


class CompletenessError(QuantumOpsError):
    """Measurement operators do not resolve the identity."""


class ConfigError(QuantumOpsError):
    """Invalid simulation configuration."""


class ConvergenceError(ArithmeticError):
    """Iterative eigensolver hit its sweep cap."""
