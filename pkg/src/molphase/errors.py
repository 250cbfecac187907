"""Exception hierarchy.

Two broad families: ``ValidationError`` for bad inputs or configuration
(caught before any computation starts) and ``ComputationError`` for
failures arising during a run. The CLI maps them to exit codes 2 and 1.
"""


class MolphaseError(Exception):
    """Base class for all package errors."""


class ValidationError(MolphaseError, ValueError):
    """Input, configuration, or document failed validation."""


class ParseError(ValidationError):
    """A structured text document could not be parsed."""


class TauRangeError(ValidationError):
    """The automatic evolution-time formula produced a phase outside [0, 1)."""


class ComputationError(MolphaseError):
    """A computation failed on otherwise valid inputs."""


class DegeneracyError(ComputationError):
    """Ground state is degenerate (or gap below tolerance)."""


class ReadoutError(ComputationError):
    """Probe phase is undefined (vanishing coherence or reference)."""


class CompilationError(ComputationError):
    """Pulse compilation missed its fidelity target."""
