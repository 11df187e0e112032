"""Rank-three elliptic dynamical R-matrix and its component functions."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import PoleError
from .tensor import embed, leg_weights
from .theta import DEFAULT_PARAMS, ModularParams, th


class ComponentName(str, enum.Enum):
    G = "g"
    ALPHA = "alpha"
    BETA = "beta"
    EPSILON = "epsilon"
    GAMMA = "gamma"
    DELTA = "delta"
    OMEGA = "omega"
    Y = "y"
    Z = "z"


@lru_cache(maxsize=1 << 16)
def _th(u: complex, params: ModularParams) -> complex:
    return th(u, params)


def _quot(num, den, params: ModularParams, what: str) -> complex:
    """Product of theta(num) over product of theta(den), guarding poles."""
    value = 1.0 + 0j
    for a in den:
        t = _th(complex(a), params)
        if abs(t) < params.pole_tol:
            raise PoleError(f"{what}: |theta({complex(a):.6g})| = {abs(t):.3g} below pole_tol")
        value /= t
    for a in num:
        value *= _th(complex(a), params)
    return value


def _nonzero(x: complex, params: ModularParams, what: str) -> complex:
    if abs(x) < params.pole_tol:
        raise PoleError(f"{what} vanishes ({abs(x):.3g})")
    return x


def g(u, params=DEFAULT_PARAMS):
    e = params.eta
    return _quot((u - e, u - 2 * e), (e, 2 * e), params, "g")


def alpha(q1, q2, u, params=DEFAULT_PARAMS):
    e = params.eta
    q12 = q1 - q2
    return _quot((e - u, q12 - u), (e, q12), params, "alpha")


def beta(q1, q2, u, params=DEFAULT_PARAMS):
    e = params.eta
    q12 = q1 - q2
    return _quot((e - u, u, q12 - 2 * e), (-2 * e, e, q12), params, "beta")


def epsilon(q, u, params=DEFAULT_PARAMS):
    e = params.eta
    first = _quot((e + u, 2 * e - u), (e, 2 * e), params, "epsilon")
    pref = _quot((u, e - u), (e, 2 * e), params, "epsilon")
    bracket = (_quot((q + e, q - 2 * e), (q - e, q), params, "epsilon")
               + _quot((q - e, q + 2 * e), (q + e, q), params, "epsilon"))
    return first - pref * bracket


def gamma(q1, q2, u, params=DEFAULT_PARAMS):
    e = params.eta
    return _quot((u, q1 + q2 - e - u, q1 - 2 * e, q2 + e),
                 (e, q1 + q2 - 2 * e, q1 + e, q2), params, "gamma")


def delta(q, u, params=DEFAULT_PARAMS):
    e = params.eta
    return _quot((u - q, u - q + e), (q, q - e), params, "delta")


def omega(q, u, params=DEFAULT_PARAMS):
    """omega from its defining quotient (q-independent in exact arithmetic)."""
    e = params.eta
    gqq = gamma(q, -q, u, params)
    den = epsilon(q, u, params) * gqq + gamma(q, e, u, params) * gamma(e, -q, u, params)
    return g(u, params) * gqq / _nonzero(den, params, "omega denominator")


def omega_closed(u, params=DEFAULT_PARAMS):
    e = params.eta
    return _quot((u + e, u - 2 * e), (u - e, u + 2 * e), params, "omega")


def y(q, u, params=DEFAULT_PARAMS):
    return gamma(q, -q, u, params) / _nonzero(gamma(q, params.eta, u, params), params, "y")


def z(q, u, params=DEFAULT_PARAMS):
    return g(u, params) / _nonzero(beta(q, params.eta, u, params), params, "z")


_ARITY = {"g": 0, "alpha": 2, "beta": 2, "epsilon": 1, "gamma": 2, "delta": 1,
          "omega": 1, "y": 1, "z": 1}
_FUNCS = {"g": g, "alpha": alpha, "beta": beta, "epsilon": epsilon, "gamma": gamma,
          "delta": delta, "omega": omega, "y": y, "z": z}


def component(name, args, u, params: ModularParams = DEFAULT_PARAMS) -> complex:
    """Evaluate a named component function.

    ``args`` holds the dynamical arguments in formula order: none for ``g``,
    ``(q1, q2)`` for alpha/beta/gamma, ``(q,)`` for the rest. ``omega`` with
    empty ``args`` gives the closed form.
    """
    key = ComponentName(name).value
    args = tuple(complex(a) for a in args)
    if key == "omega" and not args:
        return omega_closed(complex(u), params)
    if len(args) != _ARITY[key]:
        raise TypeError(f"{key} takes {_ARITY[key]} dynamical arguments, got {len(args)}")
    return _FUNCS[key](*args, complex(u), params)


@dataclass(frozen=True)
class RMatrix:
    entries: np.ndarray
    q: complex
    u: complex


def _unit(i, j, k, l):
    # E_ij (x) E_kl: e_j(x)e_l -> e_i(x)e_k
    return (i - 1) * 3 + (k - 1), (j - 1) * 3 + (l - 1)


def _r_terms(q, u, params):
    e = params.eta
    gu = g(u, params)
    return [
        (gu, (1, 1, 1, 1)), (gu, (3, 3, 3, 3)), (epsilon(q, u, params), (2, 2, 2, 2)),
        (alpha(e, q, u, params), (1, 2, 2, 1)), (alpha(q, e, u, params), (2, 1, 1, 2)),
        (alpha(-q, e, u, params), (2, 3, 3, 2)), (alpha(e, -q, u, params), (3, 2, 2, 3)),
        (beta(e, q, u, params), (1, 1, 2, 2)), (beta(q, e, u, params), (2, 2, 1, 1)),
        (beta(-q, e, u, params), (2, 2, 3, 3)), (beta(e, -q, u, params), (3, 3, 2, 2)),
        (gamma(-q, q, u, params), (1, 1, 3, 3)), (gamma(-q, e, u, params), (1, 2, 3, 2)),
        (-gamma(e, q, u, params), (2, 1, 2, 3)),
        (gamma(q, -q, u, params), (3, 3, 1, 1)), (gamma(q, e, u, params), (3, 2, 1, 2)),
        (-gamma(e, -q, u, params), (2, 3, 2, 1)),
        (delta(q, u, params), (3, 1, 1, 3)), (delta(-q, u, params), (1, 3, 3, 1)),
    ]


#: (row, col) positions of the structurally nonzero entries
NONZERO_PATTERN = tuple(_unit(*ijkl) for ijkl in
                        [(1, 1, 1, 1), (3, 3, 3, 3), (2, 2, 2, 2), (1, 2, 2, 1), (2, 1, 1, 2),
                         (2, 3, 3, 2), (3, 2, 2, 3), (1, 1, 2, 2), (2, 2, 1, 1), (2, 2, 3, 3),
                         (3, 3, 2, 2), (1, 1, 3, 3), (1, 2, 3, 2), (2, 1, 2, 3), (3, 3, 1, 1),
                         (3, 2, 1, 2), (2, 3, 2, 1), (3, 1, 1, 3), (1, 3, 3, 1)])


@lru_cache(maxsize=4096)
def _r_entries(q: complex, u: complex, params: ModularParams) -> np.ndarray:
    m = np.zeros((9, 9), dtype=complex)
    for coeff, ijkl in _r_terms(q, u, params):
        m[_unit(*ijkl)] = coeff
    m.setflags(write=False)
    return m


def build_r(q, u, params: ModularParams = DEFAULT_PARAMS) -> RMatrix:
    q, u = complex(q), complex(u)
    return RMatrix(_r_entries(q, u, params), q, u)


def r_matrix(q, u, params: ModularParams = DEFAULT_PARAMS) -> np.ndarray:
    """The bare 9x9 array of ``build_r`` (read-only)."""
    return _r_entries(complex(q), complex(u), params)


#: flip on V (x) V
PERMUTATION = np.zeros((9, 9))
for _i in range(3):
    for _k in range(3):
        PERMUTATION[_i * 3 + _k, _k * 3 + _i] = 1.0
PERMUTATION.setflags(write=False)

H_TOTAL = np.kron(np.diag([1, 0, -1]), np.eye(3)) + np.kron(np.eye(3), np.diag([1, 0, -1]))


def r_dyn_shifted(leg_pair, shift_leg, q, u, n_legs: int,
                  params: ModularParams = DEFAULT_PARAMS) -> np.ndarray:
    """R on ``leg_pair`` of V^{(x)n_legs} with dynamical argument q - 2 eta h_c.

    ``shift_leg`` may be a single leg index or an iterable of them (the shift
    then uses the summed weight).
    """
    a, b = leg_pair
    shift_legs = [shift_leg] if isinstance(shift_leg, (int, np.integer)) else list(shift_leg)
    q, u = complex(q), complex(u)

    def block(lam):
        try:
            return r_matrix(q - 2 * params.eta * lam, u, params)
        except PoleError as exc:
            raise PoleError(f"{exc} (shift weight {lam})") from exc

    return embed(block, (a, b), n_legs, shift_legs)


def _rel_max(diff: np.ndarray, scale: float) -> float:
    return float(np.abs(diff).max() / scale) if scale else float(np.abs(diff).max())


def unitarity_residual(q, u, params: ModularParams = DEFAULT_PARAMS) -> float:
    gg = g(u, params) * g(-u, params)
    prod = r_matrix(q, u, params) @ PERMUTATION @ r_matrix(q, -u, params) @ PERMUTATION
    return _rel_max(prod - gg * np.eye(9), abs(gg))


def dybe_residual(q, u1, u2, params: ModularParams = DEFAULT_PARAMS) -> float:
    u12 = u1 - u2
    lhs = (r_dyn_shifted((0, 1), 2, q, u12, 3, params)
           @ r_dyn_shifted((0, 2), (), q, u1, 3, params)
           @ r_dyn_shifted((1, 2), 0, q, u2, 3, params))
    rhs = (r_dyn_shifted((1, 2), (), q, u2, 3, params)
           @ r_dyn_shifted((0, 2), 1, q, u1, 3, params)
           @ r_dyn_shifted((0, 1), (), q, u12, 3, params))
    return _rel_max(lhs - rhs, float(np.abs(lhs).max()))


def zero_weight_violation(m: np.ndarray, n_legs: int) -> float:
    """Largest entry connecting basis vectors of different total weight."""
    w = leg_weights(n_legs, range(n_legs))
    mask = w[:, None] != w[None, :]
    return float(np.abs(m[mask]).max()) if mask.any() else 0.0
