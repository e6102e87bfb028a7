"""Exception types shared across the package."""


class GuardError(ValueError):
    """A numeric or resource guard was tripped (level cap, enumeration cap, noise floor)."""


class FitAbortedError(GuardError):
    """Too few usable probes survived for a log-log fit."""
