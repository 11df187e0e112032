"""Index bookkeeping on V^{(x)n} (row-major, leg 0 slowest)."""
from __future__ import annotations

from functools import lru_cache

import numpy as np

#: eigenvalues of h = E11 - E33 on e1, e2, e3
H = np.array([1, 0, -1])


@lru_cache(maxsize=None)
def basis_digits(n: int) -> np.ndarray:
    digits = np.indices((3,) * n).reshape(n, -1).T if n else np.zeros((1, 0), int)
    digits.setflags(write=False)
    return digits


def leg_weights(n: int, legs) -> np.ndarray:
    """Total h-eigenvalue of each basis vector restricted to ``legs``."""
    legs = list(legs)
    if not legs:
        return np.zeros(3 ** n, dtype=int)
    return H[basis_digits(n)[:, legs]].sum(axis=1)


def embed(op_for_weight, legs, n: int, shift_legs=()) -> np.ndarray:
    """Place an operator on ``legs`` of V^{(x)n}, identity elsewhere.

    ``op_for_weight(lam)`` returns the 3^len(legs) square block to use on basis
    columns whose total weight on ``shift_legs`` equals ``lam``. Shift legs must
    be disjoint from ``legs`` so the block is diagonal in them.
    """
    legs = list(legs)
    shift_legs = list(shift_legs)
    if len(set(legs)) != len(legs) or set(legs) & set(shift_legs):
        raise IndexError(f"overlapping legs: {legs} / {shift_legs}")
    if any(not 0 <= leg < n for leg in legs + shift_legs):
        raise IndexError(f"leg index out of range for {n} legs")
    dim = 3 ** n
    k = len(legs)
    digits = basis_digits(n)
    strides = 3 ** (n - 1 - np.arange(n))
    sub_digits = digits[:, legs]
    sub_col = sub_digits @ (3 ** (k - 1 - np.arange(k)))
    base = np.arange(dim) - sub_digits @ strides[legs]
    offsets = basis_digits(k) @ strides[legs]
    rows = base[None, :] + offsets[:, None]
    lam = leg_weights(n, shift_legs)
    out = np.zeros((dim, dim), dtype=complex)
    for value in np.unique(lam):
        cols = np.nonzero(lam == value)[0]
        block = np.asarray(op_for_weight(int(value)))
        out[rows[:, cols], cols] = block[:, sub_col[cols]]
    return out
