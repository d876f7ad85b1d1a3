"""Exception types shared across the package.

Plain input-contract violations raise the builtin ``ValueError``; the classes
here mark failures of a numerical nature that callers (notably the CLI) may
want to distinguish from bad configuration.
"""


class GraphsampError(Exception):
    """Base class for package-specific errors."""


class NumericalError(GraphsampError, RuntimeError):
    """A computation failed for numerical/structural reasons, not bad syntax."""


class DisconnectedGraphError(NumericalError):
    """Raised by operations that require a connected graph."""


class NotUniquenessSetError(NumericalError):
    """The sample set cannot determine a signal of the requested bandwidth."""


class DegenerateFeaturesError(NumericalError):
    """Feature vectors are degenerate (e.g. all identical), no scale exists."""
