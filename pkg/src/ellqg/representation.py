"""Tensor products of fundamental evaluation modules and their Lax matrices."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import EmptyModule, PoleError
from .operators import ShiftedOperator
from .rmatrix import r_dyn_shifted, r_matrix
from .tensor import embed, leg_weights
from .theta import DEFAULT_PARAMS, ModularParams

#: h-eigenvalues (lambda_1, lambda_2, lambda_3) of the auxiliary basis
LAMBDA = (1, 0, -1)


@dataclass(frozen=True)
class EvaluationModule:
    """W = V(z_1) (x) ... (x) V(z_n); metadata only."""

    z: tuple
    weight: np.ndarray = field(compare=False, repr=False)
    zero_weight_indices: tuple = field(compare=False, repr=False)

    @property
    def n(self) -> int:
        return len(self.z)

    @property
    def dim(self) -> int:
        return 3 ** len(self.z)

    @property
    def highest_weight_index(self) -> int:
        return 0


def build_module(z) -> EvaluationModule:
    zs = tuple(complex(v) for v in z)
    if not zs:
        raise EmptyModule("a module needs at least one evaluation point")
    if not all(np.isfinite(v) for v in zs):
        raise ValueError("evaluation points must be finite")
    w = leg_weights(len(zs), range(len(zs)))
    w.setflags(write=False)
    return EvaluationModule(zs, w, tuple(int(i) for i in np.nonzero(w == 0)[0]))


@dataclass(frozen=True)
class LaxMatrix:
    entries: np.ndarray
    q: complex
    u: complex


@lru_cache(maxsize=1024)
def _lax(z: tuple, q: complex, u: complex, params: ModularParams) -> np.ndarray:
    n = len(z)
    legs = n + 1
    out = None
    for k in range(1, legs):
        try:
            factor = r_dyn_shifted((0, k), range(k + 1, legs), q, u - z[k - 1], legs, params)
        except PoleError as exc:
            raise PoleError(f"Lax factor {k}: {exc}") from exc
        out = factor if out is None else out @ factor
    out.setflags(write=False)
    return out


def lax_entries(module: EvaluationModule, q, u, params: ModularParams = DEFAULT_PARAMS) -> np.ndarray:
    """Read-only (3 dim W) x (3 dim W) array of the Lax matrix."""
    return _lax(module.z, complex(q), complex(u), params)


def build_lax(module: EvaluationModule, q, u, params: ModularParams = DEFAULT_PARAMS) -> LaxMatrix:
    """Lax matrix on V (x) W via the iterated tensor-product rule.

    Factor k is R_{0k}(q - 2 eta (h_{k+1} + ... + h_n), u - z_k); leg 0 is the
    auxiliary space and factors multiply left to right in k.
    """
    q, u = complex(q), complex(u)
    return LaxMatrix(lax_entries(module, q, u, params), q, u)


def _embedded_lax(module, aux_leg, shift_legs, q, u, params):
    """Lax matrix on legs (aux_leg, 2, ..., n+1) of V (x) V (x) W."""
    n_legs = module.n + 2
    w_legs = list(range(2, n_legs))

    def block(lam):
        return lax_entries(module, q - 2 * params.eta * lam, u, params)

    return embed(block, [aux_leg] + w_legs, n_legs, shift_legs)


def rll_residual(module: EvaluationModule, q, u1, u2, params: ModularParams = DEFAULT_PARAMS) -> float:
    """Relative residual of the RLL exchange relation on V (x) V (x) W."""
    q, u1, u2 = complex(q), complex(u1), complex(u2)
    n_legs = module.n + 2
    w_legs = range(2, n_legs)
    u12 = u1 - u2
    lhs = (r_dyn_shifted((0, 1), w_legs, q, u12, n_legs, params)
           @ _embedded_lax(module, 0, (), q, u1, params)
           @ _embedded_lax(module, 1, (0,), q, u2, params))
    rhs = (_embedded_lax(module, 1, (), q, u2, params)
           @ _embedded_lax(module, 0, (1,), q, u1, params)
           @ r_dyn_shifted((0, 1), (), q, u12, n_legs, params))
    scale = float(np.abs(lhs).max())
    return float(np.abs(lhs - rhs).max()) / scale


def generator(module: EvaluationModule, row: int, col: int, u,
              params: ModularParams = DEFAULT_PARAMS) -> ShiftedOperator:
    """Operator-algebra entry ``L_{row,col}(u)`` (1-based), e.g. (1,1)=A1, (1,2)=B1, (1,3)=B2.

    Its coefficient is the End(W) block of the Lax matrix and its shift is
    ``-lambda_col``.
    """
    if not (1 <= row <= 3 and 1 <= col <= 3):
        raise IndexError(f"generator indices must lie in 1..3, got ({row}, {col})")
    u = complex(u)
    d = module.dim
    rs = slice((row - 1) * d, row * d)
    cs = slice((col - 1) * d, col * d)

    def coeff(q):
        return lax_entries(module, q, u, params)[rs, cs]

    return ShiftedOperator(((coeff, -LAMBDA[col - 1]),), module, params)


_NAMES = {"A1": (1, 1), "B1": (1, 2), "B2": (1, 3), "C1": (2, 1), "A2": (2, 2),
          "B3": (2, 3), "C2": (3, 1), "C3": (3, 2), "A3": (3, 3)}


def named_generator(module, name: str, u, params: ModularParams = DEFAULT_PARAMS) -> ShiftedOperator:
    """Generator by its letter name (A1, B1, ..., C3)."""
    return generator(module, *_NAMES[name], u, params)


def lax_zero_weight_violation(module, q, u, params=DEFAULT_PARAMS) -> float:
    m = lax_entries(module, q, u, params)
    w = leg_weights(module.n + 1, range(module.n + 1))
    mask = w[:, None] != w[None, :]
    return float(np.abs(m[mask]).max())
