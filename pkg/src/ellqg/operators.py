"""Finite q-difference operators with matrix coefficients.

An operator is a sum of terms ``(M, s)`` acting on W-valued functions of the
dynamical parameter by ``(Op psi)(q) = sum M(q) @ psi(q + 2 eta s)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ModuleMismatch
from .theta import ModularParams


@dataclass(frozen=True)
class QFunction:
    """A function of q with values in W, optionally of fixed weight."""

    fn: Callable[[complex], np.ndarray]
    weight: Optional[int] = None

    def __call__(self, q):
        return self.fn(complex(q))


@dataclass(frozen=True)
class ShiftedOperator:
    terms: tuple
    module: object
    params: ModularParams

    @property
    def dim(self):
        return self.module.dim

    @property
    def shifts(self):
        return sorted({s for _, s in self.terms})

    def _check(self, other):
        if self.module != other.module or self.params != other.params:
            raise ModuleMismatch("operators act on different modules")

    def __matmul__(self, other):
        return compose(self, other)

    def __add__(self, other):
        self._check(other)
        return ShiftedOperator(self.terms + other.terms, self.module, self.params)

    def __neg__(self):
        return scale(-1.0, self)

    def __sub__(self, other):
        return self + (-other)

    def coefficients(self, q) -> dict:
        """Coefficient matrix for each shift at ``q``, equal shifts merged."""
        q = complex(q)
        out = {}
        for coeff, s in self.terms:
            m = coeff(q)
            out[s] = out[s] + m if s in out else np.array(m, dtype=complex)
        return out

    def merged(self):
        by_shift = {}
        for coeff, s in self.terms:
            by_shift.setdefault(s, []).append(coeff)

        def summed(fs):
            return lambda q: sum(f(q) for f in fs)

        terms = tuple((summed(fs) if len(fs) > 1 else fs[0], s) for s, fs in sorted(by_shift.items()))
        return ShiftedOperator(terms, self.module, self.params)

    def apply(self, psi, q):
        return apply(self, psi, q)


def _product(fa, fb, step):
    return lambda q: fa(q) @ fb(q + step)


def compose(a: ShiftedOperator, b: ShiftedOperator) -> ShiftedOperator:
    """Operator product ``a . b``: ``(Ma, sa)(Mb, sb) -> (Ma(q) Mb(q + 2 eta sa), sa + sb)``."""
    a._check(b)
    two_eta = 2 * a.params.eta
    terms = tuple((_product(fa, fb, two_eta * sa), sa + sb)
                  for fa, sa in a.terms for fb, sb in b.terms)
    return ShiftedOperator(terms, a.module, a.params)


def scale(f, a: ShiftedOperator) -> ShiftedOperator:
    """Multiply on the left by a scalar function of the outer q (or a constant)."""
    fn = f if callable(f) else (lambda q, c=complex(f): c)

    def scaled(coeff):
        return lambda q: fn(q) * coeff(q)

    return ShiftedOperator(tuple((scaled(c), s) for c, s in a.terms), a.module, a.params)


def apply(a: ShiftedOperator, psi, q) -> np.ndarray:
    q = complex(q)
    two_eta = 2 * a.params.eta
    out = np.zeros(a.dim, dtype=complex)
    for coeff, s in a.terms:
        out += coeff(q) @ np.asarray(psi(q + two_eta * s))
    return out


def identity(module, params) -> ShiftedOperator:
    eye = np.eye(module.dim, dtype=complex)
    return ShiftedOperator(((lambda q: eye, 0),), module, params)


def shift_residual(a: ShiftedOperator, b: ShiftedOperator, q, rows=None, cols=None) -> float:
    """Max over shifts of the coefficient difference, relative to the largest coefficient.

    ``rows``/``cols`` restrict every coefficient to a sub-block first.
    """
    def restrict(m):
        if rows is not None:
            m = m[rows]
        if cols is not None:
            m = m[:, cols]
        return m

    ca = {s: restrict(m) for s, m in a.coefficients(q).items()}
    cb = {s: restrict(m) for s, m in b.coefficients(q).items()}
    scale_ = max((float(np.abs(m).max()) for m in list(ca.values()) + list(cb.values()) if m.size),
                 default=0.0)
    worst = 0.0
    for s in set(ca) | set(cb):
        da = ca.get(s)
        db = cb.get(s)
        d = da if db is None else (-db if da is None else da - db)
        if d.size:
            worst = max(worst, float(np.abs(d).max()))
    return worst / scale_ if scale_ else worst
