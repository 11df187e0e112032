"""Seeded random sampling of generic points in the fundamental cell."""
from __future__ import annotations

import numpy as np

from .errors import PoleError
from .theta import ModularParams


def cell_points(rng: np.random.Generator, k: int, params: ModularParams) -> np.ndarray:
    """``k`` points drawn uniformly from the centred cell [-1/2,1/2) + [-1/2,1/2) tau.

    Centring keeps theta magnitudes moderate; near the top edge of
    [0,1) + [0,1) tau the R-matrix entries reach ~1e7 and products of them
    lose several digits to cancellation.
    """
    a = rng.random(k) - 0.5
    b = rng.random(k) - 0.5
    return a + b * params.tau


def generic_samples(rng: np.random.Generator, k: int, count: int, check, params: ModularParams,
                    max_tries: int = 1000):
    """Draw ``count`` tuples of ``k`` cell points on which ``check`` succeeds.

    ``check(*points)`` is evaluated and its result stored; draws raising
    PoleError are rejected and redrawn. Returns a list of (points, result).
    """
    out = []
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > max_tries:
            raise RuntimeError(f"could not find {count} generic samples in {max_tries} draws")
        pts = tuple(complex(p) for p in cell_points(rng, k, params))
        try:
            out.append((pts, check(*pts)))
        except PoleError:
            continue
    return out
