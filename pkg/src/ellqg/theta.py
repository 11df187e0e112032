"""Jacobi's odd theta function and its structural identities.

Convention::

    theta(u) = -sum_j exp(pi i tau (j+1/2)^2 + 2 pi i (j+1/2)(u+1/2))

so that ``theta(u+1) = -theta(u)`` and
``theta(u+tau) = -exp(-pi i tau - 2 pi i u) theta(u)``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

MAX_TERMS_PER_SIDE = 64


@dataclass(frozen=True)
class ModularParams:
    """Fixed modular parameter ``tau`` and step ``eta`` plus numeric tolerances."""

    tau: complex = 0.8j
    eta: complex = 0.12 + 0.03j
    series_tol: float = 1e-16
    pole_tol: float = 1e-6

    def __post_init__(self):
        object.__setattr__(self, "tau", complex(self.tau))
        object.__setattr__(self, "eta", complex(self.eta))
        for name in ("tau", "eta"):
            v = getattr(self, name)
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValueError(f"{name} must be finite, got {v!r}")
        if self.tau.imag <= 0:
            raise ValueError(f"Im(tau) must be positive, got tau={self.tau!r}")
        if not (self.series_tol > 0 and self.pole_tol > 0):
            raise ValueError("series_tol and pole_tol must be positive")
        # th(eta) and th(2 eta) normalize every R-matrix entry
        for k in (1, 2):
            red, _, _ = reduce_argument(k * self.eta, self.tau)
            if abs(red) < self.pole_tol:
                raise ValueError(f"{k}*eta lies on the period lattice, got eta={self.eta!r}")


@dataclass(frozen=True)
class ThetaValue:
    value: complex
    terms_used: int


def reduce_argument(u: complex, tau: complex) -> tuple[complex, int, int]:
    """Return ``(u', m, n)`` with ``u = u' + m + n tau`` and ``u'`` in the fundamental cell."""
    n = round(u.imag / tau.imag)
    w = u - n * tau
    m = round(w.real)
    return w - m, m, n


DEFAULT_PARAMS = ModularParams()


def _series(u: complex, tau: complex, tol: float) -> tuple[complex, int]:
    def term(j):
        x = j + 0.5
        return cmath.exp(1j * math.pi * tau * x * x + 2j * math.pi * x * (u + 0.5))

    total = term(0) + term(-1)
    used = 2
    for k in range(1, MAX_TERMS_PER_SIDE):
        t_plus, t_minus = term(k), term(-k - 1)
        total += t_plus + t_minus
        used += 2
        if max(abs(t_plus), abs(t_minus)) < tol * (abs(total) + 1.0):
            return -total, used
    raise ArithmeticError(
        f"theta series did not converge within {MAX_TERMS_PER_SIDE} terms per side (tau={tau})")


def theta(u: complex, params: ModularParams = DEFAULT_PARAMS) -> ThetaValue:
    """Evaluate the theta function with argument reduction.

    The argument is first moved into the fundamental cell; the
    quasiperiodicity multiplier is accumulated in log form and applied once.

    Raises
    ------
    ValueError
        For non-finite ``u``.
    """
    u = complex(u)
    if not (math.isfinite(u.real) and math.isfinite(u.imag)):
        raise ValueError(f"theta argument must be finite, got {u!r}")
    tau = params.tau
    red, m, n = reduce_argument(u, tau)
    value, used = _series(red, tau, params.series_tol)
    if m or n:
        # theta(u' + m + n tau) = (-1)^(m+n) exp(-pi i n^2 tau - 2 pi i n u') theta(u')
        log_mult = -1j * math.pi * n * n * tau - 2j * math.pi * n * red
        sign = -1 if (m + n) % 2 else 1
        value = sign * cmath.exp(log_mult) * value
    return ThetaValue(value, used)


def th(u: complex, params: ModularParams = DEFAULT_PARAMS) -> complex:
    """Shorthand for ``theta(u, params).value``."""
    return theta(u, params).value


def quasi_multiplier(u: complex, m: int, n: int, params: ModularParams = DEFAULT_PARAMS) -> complex:
    """Exact factor ``c`` with ``theta(u + m + n tau) = c * theta(u)``."""
    tau = params.tau
    sign = -1 if (m + n) % 2 else 1
    return sign * cmath.exp(-1j * math.pi * n * n * tau - 2j * math.pi * n * u)


def quasiperiodicity_residual(u: complex, params: ModularParams = DEFAULT_PARAMS,
                              relative: bool = False) -> float:
    """Residual of both quasiperiodicity relations at ``u``.

    By default ``max(|th(u+1)+th(u)|, |th(u+tau)+m(u) th(u)|) / (1+|th(u)|)``.
    With ``relative=True`` each relation is instead divided by its own largest
    term, which stays meaningful far from the real axis where ``m(u)`` is huge.
    """
    u = complex(u)
    t = th(u, params)
    shifted = th(u + params.tau, params)
    mt = cmath.exp(-1j * math.pi * params.tau - 2j * math.pi * u) * t
    r1 = abs(th(u + 1, params) + t)
    r2 = abs(shifted + mt)
    if not relative:
        return max(r1, r2) / (1 + abs(t))
    s1 = abs(t)
    s2 = max(abs(shifted), abs(mt))
    return max(r1 / s1 if s1 else r1, r2 / s2 if s2 else r2)


def three_term_residual(u, v, x, y, params: ModularParams = DEFAULT_PARAMS) -> float:
    """Relative residual of the three-term (Riemann) identity.

    Normalized by the largest of the three quartic products.
    """
    def quad(a, b, c, d):
        return th(a + b, params) * th(a - b, params) * th(c + d, params) * th(c - d, params)

    lhs = quad(u, x, v, y)
    r1 = quad(u, y, v, x)
    r2 = quad(u, v, x, y)
    scale = max(abs(lhs), abs(r1), abs(r2))
    if scale == 0:
        return 0.0
    return abs(lhs - r1 - r2) / scale
