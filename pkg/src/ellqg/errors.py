"""Exception types shared across the package."""


class EllqgError(Exception):
    """Base class for all package errors."""


class PoleError(EllqgError, ZeroDivisionError):
    """A theta value in a denominator vanished (non-generic sample point)."""


class EmptyModule(EllqgError, ValueError):
    pass


class ModuleMismatch(EllqgError, ValueError):
    pass


class DuplicateRoots(EllqgError, ValueError):
    pass


class DegenerateRoots(EllqgError, ValueError):
    pass


class NoConvergence(EllqgError, RuntimeError):
    """Newton multistart failed; carries the best iterate seen."""

    def __init__(self, message, best_residual=None, best_iterate=None):
        super().__init__(message)
        self.best_residual = best_residual
        self.best_iterate = best_iterate


class ZeroVector(EllqgError, ValueError):
    pass


class ConfigError(EllqgError, ValueError):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
