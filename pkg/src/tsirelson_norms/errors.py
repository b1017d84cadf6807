"""Exception types shared across the package."""


class NormError(Exception):
    """Base class for all package errors."""


class GuardExceeded(NormError):
    """An input is too large for an enumeration-based operation."""

    def __init__(self, what, size, limit):
        super().__init__(f"{what}: size {size} exceeds guard {limit}")
        self.what = what
        self.size = size
        self.limit = limit


class InvalidCertificate(NormError):
    """A certificate violates a structural invariant."""

    def __init__(self, path, reason):
        where = "/".join(str(p) for p in path) or "<root>"
        super().__init__(f"invalid certificate at {where}: {reason}")
        self.path = tuple(path)
        self.reason = reason


class StabilizationFailure(NormError):
    """Iterates did not stabilize where they must; indicates an engine bug."""


class ConstructionFailed(NormError):
    """A witness search found nothing within its limits."""


class ConfigError(NormError):
    """Malformed space configuration or vector specification."""


class OverflowGuard(NormError):
    """An integer computation passed its magnitude cap."""
