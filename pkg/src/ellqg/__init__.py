"""Elliptic dynamical R-matrix of rank three, its operator algebra and Bethe ansatz."""
from .errors import (ConfigError, DegenerateRoots, DuplicateRoots, EllqgError, EmptyModule,
                     ModuleMismatch, NoConvergence, PoleError, ZeroVector)
from .theta import DEFAULT_PARAMS, ModularParams, ThetaValue

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "DegenerateRoots", "DuplicateRoots", "EllqgError", "EmptyModule",
    "ModuleMismatch", "NoConvergence", "PoleError", "ZeroVector",
    "DEFAULT_PARAMS", "ModularParams", "ThetaValue", "__version__",
]
