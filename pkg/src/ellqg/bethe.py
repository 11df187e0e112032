"""Algebraic Bethe ansatz on W = V(z_1) (x) ... (x) V(z_n).

Conventions
-----------
Spectral labels follow ``X_ab = X(., u_a - u_b)`` where the label ``u`` is the
free spectral parameter of the transfer matrix. Coefficients with general
indices are obtained by evaluating the index-1 (or index-12) formula on the
reordered root list ``(u_j, rest...)`` (or ``(u_l, u_j, rest...)``); positional
q-shifts such as ``q - 2 eta (k-1)`` refer to positions in that reordered list.
"""
from __future__ import annotations

import cmath
import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import rmatrix as rm
from .errors import DegenerateRoots, DuplicateRoots, NoConvergence, PoleError, ZeroVector
from .operators import QFunction, ShiftedOperator, identity, scale, shift_residual
from .opalg import transfer_matrix
from .representation import EvaluationModule, named_generator
from .rmatrix import _quot, _th
from .theta import DEFAULT_PARAMS, ModularParams, reduce_argument


# -- pseudovacuum -------------------------------------------------------------

def vacuum_f(q, n: int, c=0.0, params: ModularParams = DEFAULT_PARAMS) -> complex:
    """f(q) = exp(c q) theta(q - eta)^n."""
    q = complex(q)
    return cmath.exp(complex(c) * q) * _th(q - params.eta, params) ** n


@dataclass(frozen=True)
class PseudoVacuum:
    """Omega(q) = f(q) e1 (x) ... (x) e1 with f(q) = exp(c q) theta(q - eta)^n."""

    n: int
    c: complex = 0j
    params: ModularParams = DEFAULT_PARAMS

    def f(self, q) -> complex:
        return vacuum_f(q, self.n, self.c, self.params)

    def __call__(self, q) -> np.ndarray:
        v = np.zeros(3 ** self.n, dtype=complex)
        v[0] = self.f(q)
        return v

    def as_qfunction(self) -> QFunction:
        return QFunction(self, weight=self.n)


def vacuum_eigenvalue(which: int, q, u, module: EvaluationModule,
                      params: ModularParams = DEFAULT_PARAMS) -> complex:
    """Eigenvalue a_1(u), a_2(q, u) or a_3(q, u) of A_which on e1 (x) ... (x) e1.

    a_1 does not depend on q.
    """
    e = params.eta
    q, u = complex(q), complex(u)
    n = module.n
    norm = (e, 2 * e)
    if which == 1:
        num = [a for zk in module.z for a in (u - zk - e, u - zk - 2 * e)]
        return _quot(num, norm * n, params, "a1")
    if which == 2:
        num = [a for zk in module.z for a in (u - zk - e, u - zk)]
        return _quot([q - 2 * e * n - e] + num, [q - e] + list(norm * n), params, "a2")
    if which == 3:
        num = [a for zk in module.z for a in (u - zk, u - zk + e)]
        return _quot([q - 2 * e * n, q - 2 * e * n + e] + num, [q + e, q] + list(norm * n),
                     params, "a3")
    raise ValueError(f"which must be 1, 2 or 3, got {which}")


# -- creation operators -------------------------------------------------------

def _check_distinct(us, params, exc=DuplicateRoots, tol=None):
    tol = params.pole_tol if tol is None else tol
    for a, b in itertools.combinations(range(len(us)), 2):
        red, _, _ = reduce_argument(complex(us[a] - us[b]), params.tau)
        if abs(red) < tol:
            raise exc(f"spectral parameters {a + 1} and {b + 1} coincide modulo the lattice")


def phi(module: EvaluationModule, us: Sequence[complex],
        params: ModularParams = DEFAULT_PARAMS) -> ShiftedOperator:
    """Creation operator Phi_n(u_1, ..., u_n) from its recurrence.

    Phi_n = B1(u1) Phi_{n-1}(u2..un)
            - sum_j [prod_{k=2}^{j-1} w_jk / y_1j(q)] prod_{k!=1,j} z_kj(q+2eta)
              B2(u1) Phi_{n-2}(u2..^uj..un) A1(uj)
    with Phi_0 = 1.
    """
    us = [complex(v) for v in us]
    _check_distinct(us, params)
    return _phi(module, tuple(us), params)


def _phi(module, us: tuple, params) -> ShiftedOperator:
    n = len(us)
    if n == 0:
        return identity(module, params)
    b1 = named_generator(module, "B1", us[0], params)
    if n == 1:
        return b1
    e = params.eta
    u1 = us[0]
    out = b1 @ _phi(module, us[1:], params)
    b2 = named_generator(module, "B2", u1, params)
    for j in range(1, n):
        uj = us[j]
        rest = us[1:j] + us[j + 1:]
        pre = 1 + 0j
        for k in range(1, j):
            pre *= rm.omega_closed(uj - us[k], params)

        def bracket(q, pre=pre, uj=uj, rest=rest):
            val = pre / rm.y(q, u1 - uj, params)
            for uk in rest:
                val *= rm.z(q + 2 * e, uk - uj, params)
            return val

        term = b2 @ _phi(module, rest, params) @ named_generator(module, "A1", uj, params)
        out = out - scale(bracket, term)
    return out


def phi_symmetry_residual(module, us, i: int, q, params: ModularParams = DEFAULT_PARAMS) -> float:
    """Phi_n(.., u_i, u_{i+1}, ..) against w_{i+1,i} Phi_n(.., u_{i+1}, u_i, ..), 1-based ``i``."""
    us = [complex(v) for v in us]
    if not 1 <= i < len(us):
        raise IndexError(f"swap position must lie in 1..{len(us) - 1}, got {i}")
    swapped = list(us)
    swapped[i - 1], swapped[i] = swapped[i], swapped[i - 1]
    w = rm.omega_closed(us[i] - us[i - 1], params)
    return shift_residual(phi(module, us, params), scale(w, phi(module, swapped, params)), q)


# -- coefficients of the action formulas ---------------------------------------

class CoefficientName(str, enum.Enum):
    D = "D"
    E = "E"
    F1 = "F1"
    F2 = "F2"
    G1 = "G1"
    G2 = "G2"
    G3 = "G3"
    H = "H"
    I = "I"  # noqa: E741
    K1 = "K1"
    K2 = "K2"
    K3 = "K3"


_DOUBLE = {"E", "G1", "G2", "G3", "I", "K2"}


def _reordered(us, indices):
    """1-based indices -> (u_l, u_j, rest...) or (u_j, rest...)."""
    idx = [i - 1 for i in indices]
    return [us[i] for i in idx] + [v for k, v in enumerate(us) if k not in idx]


def _c_D(q, u, s, p):
    e = p.eta
    r = -rm.alpha(e, q, s[0] - u, p) / rm.beta(q, e, s[0] - u, p)
    for uk in s[1:]:
        r *= rm.z(q, uk - s[0], p)
    return r


def _c_E(q, u, s, p):
    e = p.eta
    u1, u2 = s[0], s[1]
    r = (rm.delta(-q, u1 - u, p) / (rm.gamma(q, -q, u1 - u, p) * rm.y(q - 2 * e, u1 - u2, p))
         + rm.z(q, u1 - u, p) * rm.alpha(e, q, u2 - u, p) * rm.omega_closed(u - u1, p)
         / (rm.beta(q, e, u2 - u, p) * rm.y(q, u - u1, p)))
    for uk in s[2:]:
        r *= rm.z(q + 2 * e, uk - u1, p) * rm.z(q, uk - u2, p)
    return r


def _c_F1(q, u, s, p):
    # alpha_u1(q, eta); the shifted first argument alpha_u1(q - 2 eta, eta) fails
    e = p.eta
    r = -rm.alpha(q, e, u - s[0], p) / rm.beta(q, e, u - s[0], p)
    for pos, uk in enumerate(s[1:], start=2):
        r *= rm.z(q - 2 * e * (pos - 1), s[0] - uk, p) / rm.omega_closed(s[0] - uk, p)
    return r


def _c_F2(q, u, s, p):
    e = p.eta
    r = 1 / rm.y(q, u - s[0], p)
    for uk in s[1:]:
        r *= rm.z(q + 2 * e, uk - s[0], p)
    return r


def _c_G1(q, u, s, p):
    e = p.eta
    u1, u2 = s[0], s[1]
    qm = q - 2 * e
    r = (rm.z(q, u - u1, p) * rm.alpha(qm, e, u - u2, p) / rm.beta(qm, e, u - u2, p)
         - rm.alpha(q, e, u - u1, p) * rm.alpha(qm, e, u1 - u2, p)
         / (rm.beta(q, e, u - u1, p) * rm.beta(qm, e, u1 - u2, p))) / rm.y(q, u - u1, p)
    for pos, uk in enumerate(s[2:], start=3):
        r *= (rm.z(q + 2 * e, uk - u1, p) * rm.z(q - 2 * e * (pos - 1), u2 - uk, p)
              / rm.omega_closed(u2 - uk, p))
    return r


def _c_G2(q, u, s, p):
    # alpha_12(q + 2 eta, eta), matching the six-line identity
    e = p.eta
    u1, u2 = s[0], s[1]
    r = (rm.alpha(q, e, u - u1, p) * rm.alpha(q + 2 * e, e, u1 - u2, p)
         / (rm.beta(q, e, u - u1, p) * rm.y(q, u - u1, p) * rm.beta(q - 2 * e, e, u1 - u2, p)))
    for pos, uk in enumerate(s[2:], start=3):
        r *= (rm.z(q + 2 * e, uk - u2, p) * rm.z(q - 2 * e * (pos - 1), u1 - uk, p)
              / rm.omega_closed(u1 - uk, p))
    return r


def _c_G3(q, u, s, p):
    e = p.eta
    u1, u2 = s[0], s[1]
    r = (rm.alpha(q, e, u - u1, p) / rm.beta(e, -q, u - u1, p)
         * (rm.z(q, u - u1, p) / (rm.omega_closed(u - u1, p) * rm.y(q, u - u2, p))
            - rm.alpha(e, -q, u - u1, p) / (rm.y(q, u1 - u2, p) * rm.beta(q, e, u - u1, p))))
    for pos, uk in enumerate(s[2:], start=3):
        r *= (rm.z(q + 2 * e, uk - u2, p) * rm.z(q - 2 * e * (pos - 2), u1 - uk, p)
              / rm.omega_closed(u1 - uk, p))
    return r


def _c_H(q, u, s, p):
    e = p.eta
    r = -1 / rm.y(q, u - s[0], p)
    for pos, uk in enumerate(s[1:], start=2):
        r *= rm.z(q - 2 * e * (pos - 2), s[0] - uk, p) / rm.omega_closed(s[0] - uk, p)
    return r


def _c_I(q, u, s, p):
    # gamma_u1, delta_u1 and z_1k z_2k in the product
    e = p.eta
    u1, u2 = s[0], s[1]
    r = (rm.delta(q, u - u1, p) / rm.y(q - 2 * e, u1 - u2, p)
         - rm.alpha(q, e, u - u1, p) / rm.y(q - 2 * e, u - u2, p)) / rm.gamma(q, -q, u - u1, p)
    for pos, uk in enumerate(s[2:], start=3):
        qs = q - 2 * e * (pos - 2)
        r *= (rm.z(qs, u2 - uk, p) * rm.z(qs, u1 - uk, p)
              / (rm.omega_closed(u1 - uk, p) * rm.omega_closed(u2 - uk, p)))
    return r


_BASE = {"D": _c_D, "E": _c_E, "F1": _c_F1, "F2": _c_F2, "G1": _c_G1, "G2": _c_G2,
         "G3": _c_G3, "H": _c_H, "I": _c_I}


def coefficient(name, indices, u, q, us, module: Optional[EvaluationModule] = None, c=0.0,
                params: ModularParams = DEFAULT_PARAMS) -> complex:
    """Evaluate a named coefficient of the A_i action formulas or of t(u).

    Parameters
    ----------
    name : CoefficientName or str
    indices : tuple of int
        1-based ``(j,)`` for single-index coefficients, ``(l, j)`` with
        ``l < j`` for double-index ones.
    u, q : complex
        Free spectral parameter and dynamical parameter.
    us : sequence of complex
        The ordered spectral parameters of Phi_n.
    module, c
        Needed only for the K coefficients (vacuum eigenvalues and f).
    """
    key = CoefficientName(name).value
    us = [complex(v) for v in us]
    indices = tuple(int(i) for i in indices)
    want = 2 if key in _DOUBLE else 1
    if len(indices) != want or not all(1 <= i <= len(us) for i in indices):
        raise IndexError(f"{key} needs {want} indices in 1..{len(us)}, got {indices}")
    if want == 2 and indices[0] >= indices[1]:
        raise IndexError(f"{key} needs l < j, got {indices}")
    q, u = complex(q), complex(u)
    s = _reordered(us, indices)
    if key in _BASE:
        return _BASE[key](q, u, s, params)
    if module is None:
        raise ValueError("K coefficients need the module")
    e = params.eta
    n = module.n

    def f(x):
        return vacuum_f(x, n, c, params)

    def a1(v):
        return vacuum_eigenvalue(1, q, v, module, params)

    def a2(x, v):
        return vacuum_eigenvalue(2, x, v, module, params)

    if key == "K1":
        uj = s[0]
        return _c_D(q, u, s, params) * a1(uj) * f(q - 2 * e) / f(q) + _c_F1(q, u, s, params) * a2(q, uj)
    if key == "K3":
        uj = s[0]
        return (_c_F2(q, u, s, params) * a1(uj) * f(q) / f(q + 2 * e)
                + _c_H(q, u, s, params) * a2(q + 2 * e, uj))
    ul, uj = s[0], s[1]
    ratio = f(q) / f(q + 2 * e)
    return (_c_E(q, u, s, params) * a1(ul) * a1(uj) * f(q - 2 * e) / f(q + 2 * e)
            + _c_G1(q, u, s, params) * a1(ul) * a2(q, uj) * ratio
            + _c_G2(q, u, s, params) * a1(uj) * a2(q, ul) * ratio
            + _c_G3(q, u, s, params) * a2(q + 2 * e, ul) * a1(uj) * ratio
            + _c_I(q, u, s, params) * a2(q + 2 * e, ul) * a2(q + 2 * e, uj))


def f1_closed_form(l: int, u, q, us, params: ModularParams = DEFAULT_PARAMS) -> complex:
    """Closed form of F1_l (1-based ``l``), telescoping the product of z factors."""
    e = params.eta
    us = [complex(v) for v in us]
    q, u = complex(q), complex(u)
    n = len(us)
    ul = us[l - 1]
    r = (-rm.alpha(q, e, u - ul, params) / rm.beta(q, e, u - ul, params)
         * _quot([q - 3 * e], [q - 2 * e * n - e], params, "F1"))
    for k, uk in enumerate(us):
        if k != l - 1:
            r *= _quot([ul - uk - 2 * e], [ul - uk], params, "F1") / rm.omega_closed(ul - uk, params)
    return r


def omega_prefactor(us, indices, params: ModularParams = DEFAULT_PARAMS) -> complex:
    """prod_{k<j} w_jk, or prod_{k<l} w_lk prod_{k<j, k!=l} w_jk (1-based indices)."""
    us = [complex(v) for v in us]
    val = 1 + 0j
    if len(indices) == 1:
        j = indices[0] - 1
        for k in range(j):
            val *= rm.omega_closed(us[j] - us[k], params)
        return val
    l, j = indices[0] - 1, indices[1] - 1
    for k in range(l):
        val *= rm.omega_closed(us[l] - us[k], params)
    for k in range(j):
        if k != l:
            val *= rm.omega_closed(us[j] - us[k], params)
    return val


def wanted_factor(which: int, u, q, us, params: ModularParams = DEFAULT_PARAMS) -> complex:
    """Coefficient of Phi_n A_which(u) in A_which(u) Phi_n."""
    e = params.eta
    q, u = complex(q), complex(u)
    val = 1 + 0j
    for k, uk in enumerate(complex(v) for v in us):
        if which == 1:
            val *= rm.z(q, uk - u, params)
        elif which == 2:
            val *= rm.z(q - 2 * e * k, u - uk, params) / rm.omega_closed(u - uk, params)
        elif which == 3:
            qk = q - 2 * e * k
            val *= rm.beta(e, -q, u - uk, params) / rm.gamma(qk, -qk, u - uk, params)
        else:
            raise ValueError(f"which must be 1, 2 or 3, got {which}")
    return val


def a1_action_sides(module, u, us, params: ModularParams = DEFAULT_PARAMS):
    """A1(u) Phi_n and its expansion into the wanted term plus D and E terms."""
    u = complex(u)
    us = [complex(v) for v in us]
    n = len(us)
    lhs = named_generator(module, "A1", u, params) @ phi(module, us, params)
    rhs = scale(lambda q: wanted_factor(1, u, q, us, params),
                phi(module, us, params) @ named_generator(module, "A1", u, params))
    b1 = named_generator(module, "B1", u, params)
    b2 = named_generator(module, "B2", u, params)
    for j in range(1, n + 1):
        rest = [v for k, v in enumerate(us) if k != j - 1]
        term = b1 @ phi(module, rest, params) @ named_generator(module, "A1", us[j - 1], params)
        w = omega_prefactor(us, (j,), params)
        rhs = rhs + scale(lambda q, j=j, w=w: w * coefficient("D", (j,), u, q, us, params=params), term)
    for j in range(1, n + 1):
        for l in range(1, j):
            rest = [v for k, v in enumerate(us) if k not in (l - 1, j - 1)]
            term = (b2 @ phi(module, rest, params) @ named_generator(module, "A1", us[l - 1], params)
                    @ named_generator(module, "A1", us[j - 1], params))
            w = omega_prefactor(us, (l, j), params)
            rhs = rhs + scale(lambda q, l=l, j=j, w=w: w * coefficient("E", (l, j), u, q, us, params=params),
                              term)
    return lhs, rhs


def a1_action_residual(module, u, us, q, params: ModularParams = DEFAULT_PARAMS) -> float:
    lhs, rhs = a1_action_sides(module, u, us, params)
    return shift_residual(lhs, rhs, q)


# -- consistency identities ----------------------------------------------------

def alpha_beta_identity_residual(q, u, params: ModularParams = DEFAULT_PARAMS) -> float:
    """alpha(eta,q,u)/beta(q,eta,u) + alpha(q,eta,-u)/beta(q,eta,-u), relative."""
    e = params.eta
    left = rm.alpha(e, q, u, params) / rm.beta(q, e, u, params)
    right = -rm.alpha(q, e, -u, params) / rm.beta(q, e, -u, params)
    return abs(left - right) / max(abs(left), abs(right))


def k2_identity_terms(q, u, u1, u2, params: ModularParams = DEFAULT_PARAMS) -> list:
    """The five summands of the six-line identity (they sum to zero)."""
    p = params
    e = p.eta
    q, u, u1, u2 = (complex(v) for v in (q, u, u1, u2))
    t = lambda x: _th(complex(x), p)  # noqa: E731
    u12, u21 = u1 - u2, u2 - u1
    t1 = ((rm.delta(-q, u1 - u, p) / (rm.gamma(q, -q, u1 - u, p) * rm.y(q - 2 * e, u12, p))
           + rm.z(q, u1 - u, p) * rm.alpha(e, q, u2 - u, p) * rm.omega_closed(u - u1, p)
           / (rm.beta(q, e, u2 - u, p) * rm.y(q, u - u1, p))) * t(q - 3 * e) ** 2)
    t2 = ((rm.delta(q, u - u1, p) / (rm.gamma(q, -q, u - u1, p) * rm.y(q - 2 * e, u12, p))
           - rm.alpha(q, e, u - u1, p) / (rm.gamma(q, -q, u - u1, p) * rm.y(q - 2 * e, u - u2, p)))
          * t(q - 3 * e) ** 2)
    t3 = (_c_G1(q, u, [u1, u2], p)
          * t(u21 + e) * t(q - 5 * e) * t(q - e) / t(u21 - e))
    t4 = (_c_G2(q, u, [u1, u2], p)
          * t(u12 + e) * t(q - 5 * e) * t(q - e) / t(u12 - e))
    t5 = (_c_G3(q, u, [u1, u2], p)
          * t(u12 + e) * t(q - 3 * e) * t(q - e) ** 2 / (t(u12 - e) * t(q + e)))
    return [t1, t2, t3, t4, t5]


def k2_identity_residual(q, u, u1, u2, params: ModularParams = DEFAULT_PARAMS) -> float:
    """|sum of the five summands| relative to the largest summand."""
    terms = k2_identity_terms(q, u, u1, u2, params)
    return abs(sum(terms)) / max(abs(x) for x in terms)


# -- Bethe equations -------------------------------------------------------------

def bethe_residual(us, z, c=0.0, params: ModularParams = DEFAULT_PARAMS) -> np.ndarray:
    """Component j: prod_k th(u_j-z_k-2eta)/th(u_j-z_k) - e^{2c eta} prod_{k!=j} th(u_jk-eta)/th(u_jk+eta)."""
    us = [complex(v) for v in us]
    e = params.eta
    try:
        _check_distinct(us, params, exc=PoleError)
    except PoleError as exc:
        raise PoleError(f"bethe_residual: {exc}") from None
    twist = cmath.exp(2 * complex(c) * e)
    out = np.empty(len(us), dtype=complex)
    for j, uj in enumerate(us):
        left = _quot([uj - zk - 2 * e for zk in z], [uj - zk for zk in z], params, "Bethe lhs")
        others = [uk for k, uk in enumerate(us) if k != j]
        right = _quot([uj - uk - e for uk in others], [uj - uk + e for uk in others],
                      params, "Bethe rhs")
        out[j] = left - twist * right
    return out


@dataclass(frozen=True)
class BetheSystem:
    n: int
    z: tuple
    c: complex
    roots: tuple
    residual_norm: float
    newton_iterations: int
    restarts_used: int = 0
    params: ModularParams = field(default=DEFAULT_PARAMS, repr=False)


def canonical_roots(us) -> tuple:
    """Reduce real parts into [0, 1) and sort by (Re, Im)."""
    red = []
    for v in us:
        v = complex(v)
        red.append(complex(v.real - math.floor(v.real), v.imag))
    return tuple(sorted(red, key=lambda v: (round(v.real, 12), round(v.imag, 12))))


def _jacobian(fun, x, h=1e-6):
    n = len(x)
    jac = np.empty((n, n), dtype=complex)
    for k in range(n):
        step = np.zeros(n, dtype=complex)
        step[k] = h
        jac[:, k] = (fun(x + step) - fun(x - step)) / (2 * h)
    return jac


def _newton(fun, x0, tol, max_iter=80):
    x = np.array(x0, dtype=complex)
    fx = fun(x)
    norm = float(np.abs(fx).max())
    for it in range(1, max_iter + 1):
        if norm < tol:
            return _polish(fun, x, fx, norm) + (it - 1,)
        dx = np.linalg.solve(_jacobian(fun, x), -fx)
        lam = 1.0
        while lam > 1e-4:
            try:
                trial = x + lam * dx
                ft = fun(trial)
                nt = float(np.abs(ft).max())
            except PoleError:
                nt = math.inf
            if nt < norm or lam <= 1e-3:
                break
            lam *= 0.5
        if not math.isfinite(nt):
            break
        x, fx, norm = trial, ft, nt
    return x, norm, max_iter


def _polish(fun, x, fx, norm, steps=3):
    # a few undamped steps past the tolerance, kept only while they help
    for _ in range(steps):
        try:
            trial = x + np.linalg.solve(_jacobian(fun, x), -fx)
            ft = fun(trial)
        except (PoleError, np.linalg.LinAlgError):
            break
        nt = float(np.abs(ft).max())
        if nt >= norm:
            break
        x, fx, norm = trial, ft, nt
    return x, norm


def default_seeds(z, n_restarts: int, rng: np.random.Generator, params: ModularParams):
    """z_j + eta + 1/2 plus complex jitter of magnitude 0.05."""
    base = np.array([complex(v) + params.eta + 0.5 for v in z])
    for _ in range(n_restarts):
        phase = rng.uniform(0, 2 * np.pi, len(base))
        yield base + 0.05 * np.exp(1j * phase)


def solve_bethe(n: int, z, c=0.0, seeds=None, params: ModularParams = DEFAULT_PARAMS,
                tol: float = 1e-11, n_restarts: int = 20, seed: int = 0) -> BetheSystem:
    """Solve the Bethe equations by damped multistart Newton.

    Parameters
    ----------
    seeds : iterable of length-n sequences, optional
        Starting points. Defaults to ``n_restarts`` jittered copies of
        ``z_j + eta + 1/2``.

    Raises
    ------
    DegenerateRoots
        If the seeds, or every converged solution, have coinciding components.
    NoConvergence
        If no restart reaches ``tol``.
    """
    z = tuple(complex(v) for v in z)
    if n < 1 or len(z) != n:
        raise ValueError(f"need n >= 1 evaluation points, got n={n}, len(z)={len(z)}")
    c = complex(c)
    if seeds is None:
        seeds = list(default_seeds(z, n_restarts, np.random.default_rng(seed), params))
    else:
        seeds = [np.array(s, dtype=complex) for s in seeds]
        for s in seeds:
            _check_distinct(list(s), params, exc=DegenerateRoots, tol=1e-8)

    def fun(x):
        return bethe_residual(x, z, c, params)

    best = (math.inf, None)
    degenerate = 0
    for k, s in enumerate(seeds, start=1):
        try:
            x, norm, its = _newton(fun, s, tol)
        except (PoleError, np.linalg.LinAlgError):
            continue
        if norm < best[0]:
            best = (norm, x)
        if norm >= tol:
            continue
        try:
            _check_distinct(list(x), params, exc=DegenerateRoots, tol=1e-6)
        except DegenerateRoots:
            degenerate += 1
            continue
        roots = canonical_roots(x)
        final = float(np.abs(fun(np.array(roots))).max())
        return BetheSystem(n, z, c, roots, final, its, k, params)
    if degenerate:
        raise DegenerateRoots(f"all {degenerate} converged solutions have coinciding roots")
    raise NoConvergence(f"no restart reached tolerance {tol:g}; best residual {best[0]:.3g}",
                        best_residual=best[0], best_iterate=best[1])


# -- eigenvalues -------------------------------------------------------------------

def eigenvalue_lambda(u, us, z, c=0.0, params: ModularParams = DEFAULT_PARAMS) -> complex:
    """q-independent three-term eigenvalue of t(u) on Phi_n Omega.

    The middle term carries th(u-u_k-eta) th(u-u_k+2eta) / (th(u-u_k) th(u-u_k+eta));
    it follows from the general form with f(q) = exp(cq) th(q-eta)^n.
    """
    e = params.eta
    u = complex(u)
    c = complex(c)
    us = [complex(v) for v in us]
    n1, d1, n2, d2, n3, d3 = [], [], [], [], [], []
    for zk, uk in zip(z, us):
        n1 += [u - zk - e, u - zk - 2 * e, u - uk + 2 * e]
        d1 += [e, 2 * e, u - uk]
        n2 += [u - zk - e, u - zk, u - uk - e, u - uk + 2 * e]
        d2 += [e, 2 * e, u - uk, u - uk + e]
        n3 += [u - zk, u - zk + e, u - uk - e]
        d3 += [e, 2 * e, u - uk + e]
    return (cmath.exp(-2 * e * c) * _quot(n1, d1, params, "Lambda")
            + _quot(n2, d2, params, "Lambda")
            + cmath.exp(2 * e * c) * _quot(n3, d3, params, "Lambda"))


def eigenvalue_general(u, us, module: EvaluationModule, c, q,
                       params: ModularParams = DEFAULT_PARAMS) -> complex:
    """Wanted-term eigenvalue at dynamical parameter q (q-independent at roots)."""
    e = params.eta
    n = module.n
    q, u = complex(q), complex(u)

    def f(x):
        return vacuum_f(x, n, c, params)

    return (wanted_factor(1, u, q, us, params) * vacuum_eigenvalue(1, q, u, module, params)
            * f(q - 2 * e) / f(q)
            + wanted_factor(2, u, q, us, params) * vacuum_eigenvalue(2, q, u, module, params)
            + wanted_factor(3, u, q, us, params) * vacuum_eigenvalue(3, q, u, module, params)
            * f(q + 2 * e) / f(q))


def bethe_vector(module, us, c=0.0, params: ModularParams = DEFAULT_PARAMS) -> QFunction:
    """Psi(q) = (Phi_n(u_1..u_n) Omega)(q), a weight-0 function when n equals the number of sites."""
    op = phi(module, us, params)
    vac = PseudoVacuum(module.n, complex(c), params)
    return QFunction(lambda q: op.apply(vac, q), weight=module.n - len(us))


def eigencheck(module, system: BetheSystem, u, q_samples, params: Optional[ModularParams] = None) -> float:
    """max_q |t(u) Psi - Lambda Psi| / (|Lambda| |Psi|) over ``q_samples``."""
    params = system.params if params is None else params
    us = list(system.roots)
    op = phi(module, us, params)
    t_op = transfer_matrix(module, u, params) @ op
    vac = PseudoVacuum(module.n, system.c, params)
    lam = eigenvalue_lambda(u, us, module.z, system.c, params)
    worst = 0.0
    for q in q_samples:
        psi = op.apply(vac, q)
        norm = float(np.linalg.norm(psi))
        if norm < params.pole_tol:
            raise ZeroVector(f"|Psi(q)| = {norm:.3g} at q = {complex(q):.6g}")
        tpsi = t_op.apply(vac, q)
        worst = max(worst, float(np.linalg.norm(tpsi - lam * psi)) / (abs(lam) * norm))
    return worst


def unwanted_coefficients(module, us, c, u, q, params: ModularParams = DEFAULT_PARAMS) -> dict:
    """All K coefficients keyed by (name, indices)."""
    n = len(us)
    out = {}
    for j in range(1, n + 1):
        for name in ("K1", "K3"):
            out[(name, (j,))] = coefficient(name, (j,), u, q, us, module, c, params)
    for j in range(1, n + 1):
        for l in range(1, j):
            out[("K2", (l, j))] = coefficient("K2", (l, j), u, q, us, module, c, params)
    return out
