"""Exception hierarchy.

Grouped by how the CLI maps them to exit codes: usage problems (bad
arguments, malformed files) exit 2, resource refusals exit 3, violated
numerical invariants exit 4.
"""

from __future__ import annotations


class QinterpError(Exception):
    """Base class for all package errors."""


class ArgumentError(QinterpError, ValueError):
    """Invalid argument: out-of-range qubit, bad length, unknown register."""


class LayoutError(ArgumentError):
    """Register layout is inconsistent (overlaps, gaps, duplicate names)."""


class ParseError(QinterpError, ValueError):
    """Malformed image file. Carries the byte offset of the problem."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)


class EncodingError(QinterpError, ValueError):
    """Data cannot be amplitude encoded (negative values, zero norm, ...)."""


class ResourceError(QinterpError):
    """Simulation refused: it would exceed the configured memory budget."""


class InvariantViolation(QinterpError):
    """A numerical invariant that should hold to rounding error does not."""


class EntanglementError(InvariantViolation):
    """Qubits that should be separable |0> carry residual population.

    ``residual`` is the l2 norm of the discarded branch.
    """

    def __init__(self, message: str, residual: float):
        self.residual = residual
        super().__init__(f"{message} (residual {residual:.3e})")


class SpectralRangeError(InvariantViolation):
    """Inverse cosine-transform input lies outside the isometry's range."""


class DegenerateError(InvariantViolation):
    """Operation is undefined on this input (e.g. nothing left in band)."""


class BoundViolationError(InvariantViolation):
    """A proven distance bound was exceeded beyond rounding tolerance."""
