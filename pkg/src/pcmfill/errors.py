"""Exception types shared across the package."""


class PcmFillError(Exception):
    """Base class for all package-specific errors."""


class CapacityError(PcmFillError, ValueError):
    """Input exceeds the hard size limits of the exact algorithms."""


class DisconnectedGraphError(PcmFillError, ValueError):
    """Operation requires a connected comparison graph."""


class ConvergenceError(PcmFillError, RuntimeError):
    """An iterative solver hit its iteration cap before converging."""


class CorruptArtifactError(PcmFillError):
    """Stored run artifact failed its integrity check."""


class SchemaVersionError(PcmFillError):
    """Stored run artifact uses an unsupported schema version."""


class SequencingError(PcmFillError, ValueError):
    """Answer submitted out of the order prescribed by the filling sequence."""

    def __init__(self, message, allowed_pairs=None):
        super().__init__(message)
        self.allowed_pairs = allowed_pairs or []


class SessionStateError(PcmFillError):
    """Session is not in a state that permits the requested action."""
