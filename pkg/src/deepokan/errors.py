"""Exception types shared across the package."""


class FormatError(ValueError):
    """Raised when a binary artifact has wrong magic bytes or layout."""


class VersionError(FormatError):
    """Raised when a binary artifact has an unsupported format version."""


class NumericalError(RuntimeError):
    """Raised when a numeric procedure fails: divergence, solver breakdown."""
