"""Verification suites shared by the CLI and the acceptance tests.

Every check returns a :class:`CheckRecord`. Randomness comes from a generator
seeded by ``(seed, crc32(check_name))`` so each check is reproducible on its
own and independent of execution order.
"""
from __future__ import annotations

import zlib
from dataclasses import asdict, dataclass
from typing import Callable, Optional

import numpy as np

from . import bethe, opalg, rmatrix as rm
from .errors import EllqgError, NoConvergence, PoleError, ZeroVector
from .representation import build_module, lax_entries, named_generator, rll_residual
from .sampling import cell_points, generic_samples
from .tensor import leg_weights
from .theta import (ModularParams, quasi_multiplier, quasiperiodicity_residual, th,
                    three_term_residual)

SUITES = ("theta", "rmatrix", "lax", "opalg", "bethe")


@dataclass
class CheckRecord:
    check_name: str
    samples_run: int
    max_residual: float
    tolerance: float
    passed: bool
    detail: str = ""

    def to_dict(self):
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


@dataclass(frozen=True)
class SuiteContext:
    params: ModularParams
    z: tuple
    c: complex
    samples: int
    seed: int
    tol: Optional[float] = None

    def rng(self, name: str) -> np.random.Generator:
        return np.random.default_rng([self.seed, zlib.crc32(name.encode())])

    def tolerance(self, default: float) -> float:
        return default if self.tol is None else self.tol

    @property
    def module(self):
        return build_module(self.z)


def _record(ctx: SuiteContext, name: str, default_tol: float, run: Callable) -> CheckRecord:
    """Run ``run(rng) -> (samples, residual[, detail])`` and wrap the outcome."""
    tol = ctx.tolerance(default_tol)
    try:
        out = run(ctx.rng(name))
    except (EllqgError, ArithmeticError, RuntimeError) as exc:
        return CheckRecord(name, 0, float("inf"), tol, False, f"{type(exc).__name__}: {exc}")
    samples, residual = out[0], float(out[1])
    detail = out[2] if len(out) > 2 else ""
    return CheckRecord(name, samples, residual, tol, bool(residual < tol), detail)


def _bool_record(ctx, name, run) -> CheckRecord:
    """Exact (structural) checks: residual 0 on success, 1 on failure."""
    try:
        samples, ok = run(ctx.rng(name))
    except (EllqgError, ArithmeticError, RuntimeError) as exc:
        return CheckRecord(name, 0, float("inf"), 0.0, False, f"{type(exc).__name__}: {exc}")
    return CheckRecord(name, samples, 0.0 if ok else 1.0, 0.0, bool(ok), "exact")


def _max_over(samples):
    return max(r for _, r in samples)


# -- theta -------------------------------------------------------------------------

def theta_suite(ctx: SuiteContext) -> list:
    p = ctx.params
    k = ctx.samples

    def quasi(rng):
        near = [quasiperiodicity_residual(complex(u), p, relative=True) for u in cell_points(rng, k, p)]
        far = [quasiperiodicity_residual(complex(u), p, relative=True)
               for u in rng.uniform(-8, 8, k) + 1j * rng.uniform(-4, 4, k) * p.tau.imag]
        return 2 * k, max(near + far)

    def odd(rng):
        pts = list(cell_points(rng, k, p)) + list(rng.uniform(-6, 6, k) + 3j * rng.uniform(-1, 1, k))
        worst = 0.0
        for u in pts:
            a, b = th(u, p), th(-u, p)
            worst = max(worst, abs(a + b) / max(abs(a), 1.0))
        return len(pts), worst

    def lattice(rng):
        worst = 0.0
        for u in cell_points(rng, k, p):
            m, n = rng.integers(-3, 4, 2)
            ref = quasi_multiplier(u, int(m), int(n), p) * th(u, p)
            worst = max(worst, abs(th(u + m + n * p.tau, p) - ref) / abs(ref))
        return k, worst

    def three(rng):
        res = [three_term_residual(*cell_points(rng, 4, p), p) for _ in range(k)]
        return k, max(res)

    return [_record(ctx, "theta.quasiperiodicity", 1e-10, quasi),
            _record(ctx, "theta.oddness", 1e-10, odd),
            _record(ctx, "theta.lattice_multiplier", 1e-10, lattice),
            _record(ctx, "theta.three_term", 1e-10, three)]


# -- R-matrix ----------------------------------------------------------------------

def rmatrix_suite(ctx: SuiteContext) -> list:
    p = ctx.params
    k = ctx.samples

    def r_zero(rng):
        got = generic_samples(rng, 1, k, lambda q: float(np.abs(rm.r_matrix(q, 0, p)
                                                                 - rm.PERMUTATION).max()), p)
        return k, _max_over(got)

    def unitary(rng):
        got = generic_samples(rng, 2, k, lambda q, u: rm.unitarity_residual(q, u, p), p)
        return k, _max_over(got)

    def zero_weight(rng):
        pattern = np.zeros((9, 9), dtype=bool)
        for rc in rm.NONZERO_PATTERN:
            pattern[rc] = True
        got = generic_samples(rng, 2, k, lambda q, u: rm.r_matrix(q, u, p), p)
        ok = all(rm.zero_weight_violation(m, 2) == 0 and not np.any(m[~pattern]) for _, m in got)
        return k, ok and len(rm.NONZERO_PATTERN) == 19

    def dybe(rng):
        got = generic_samples(rng, 3, k, lambda q, a, b: rm.dybe_residual(q, a, b, p), p)
        return k, _max_over(got)

    def om_q(rng):
        def spread(u):
            vals = [rm.omega(q, u, p) for q in cell_points(rng, 10, p)]
            return max(abs(v - vals[0]) for v in vals) / abs(vals[0])
        return k, _max_over(generic_samples(rng, 1, k, spread, p))

    def om_closed(rng):
        def diff(q, u):
            a, b = rm.omega(q, u, p), rm.omega_closed(u, p)
            return abs(a - b) / abs(b)
        return k, _max_over(generic_samples(rng, 2, k, diff, p))

    def om_inv(rng):
        return k, _max_over(generic_samples(
            rng, 1, k, lambda u: abs(rm.omega_closed(u, p) * rm.omega_closed(-u, p) - 1), p))

    return [_record(ctx, "rmatrix.r_at_zero_is_permutation", 1e-12, r_zero),
            _record(ctx, "rmatrix.unitarity", 1e-10, unitary),
            _bool_record(ctx, "rmatrix.zero_weight", zero_weight),
            _record(ctx, "rmatrix.dybe", 1e-9, dybe),
            _record(ctx, "rmatrix.omega_q_independence", 1e-11, om_q),
            _record(ctx, "rmatrix.omega_closed_form", 1e-11, om_closed),
            _record(ctx, "rmatrix.omega_inversion", 1e-11, om_inv)]


# -- Lax matrices -------------------------------------------------------------------

def lax_suite(ctx: SuiteContext) -> list:
    p = ctx.params
    module = ctx.module
    k = min(ctx.samples, 20)

    def rll(rng):
        got = generic_samples(rng, 3, k, lambda q, a, b: rll_residual(module, q, a, b, p), p)
        return k, _max_over(got)

    def zero_weight(rng):
        w = leg_weights(module.n + 1, range(module.n + 1))
        mask = w[:, None] != w[None, :]
        got = generic_samples(rng, 2, k, lambda q, u: lax_entries(module, q, u, p), p)
        return k, all(not np.any(m[mask]) for _, m in got)

    def highest_weight(rng):
        vac = np.zeros(module.dim)
        vac[0] = 1

        def worst(q, u):
            return max(float(np.abs(named_generator(module, name, u, p).coefficients(q)[s] @ vac).max())
                       for name, s in (("C1", -1), ("C2", -1), ("C3", 0)))
        return k, _max_over(generic_samples(rng, 2, k, worst, p))

    return [_record(ctx, "lax.rll", 1e-8, rll),
            _bool_record(ctx, "lax.zero_weight", zero_weight),
            _record(ctx, "lax.highest_weight_annihilation", 1e-12, highest_weight)]


# -- operator algebra -----------------------------------------------------------------

def opalg_suite(ctx: SuiteContext) -> list:
    p = ctx.params
    module = ctx.module
    k = min(ctx.samples, 20)
    out = []
    for rid in range(1, 6):
        def rel(rng, rid=rid):
            got = generic_samples(rng, 3, k, lambda q, a, b: opalg.commutation_residual(
                rid, a, b, q, module, p), p)
            return k, _max_over(got)
        out.append(_record(ctx, f"opalg.relation_{rid}", 1e-8, rel))

    def commute(rng):
        got = generic_samples(rng, 3, k, lambda q, a, b: opalg.transfer_commute_residual(
            module, a, b, q, p), p)
        return k, _max_over(got)

    def support(rng):
        got = generic_samples(rng, 2, k, lambda q, u: opalg.preserves_zero_weight(module, u, q, p), p)
        return k, all(ok for _, ok in got)

    out.append(_record(ctx, "opalg.transfer_commute", 1e-9, commute))
    out.append(_bool_record(ctx, "opalg.transfer_preserves_zero_weight", support))
    return out


# -- Bethe ansatz ----------------------------------------------------------------------

def _random_roots(rng, n, p):
    return [complex(v) for v in cell_points(rng, n, p)]


def bethe_suite(ctx: SuiteContext, system: Optional[bethe.BetheSystem] = None) -> list:
    p = ctx.params
    module = ctx.module
    n = module.n
    k = min(ctx.samples, 20)
    k_small = min(ctx.samples, 5)
    out = []

    def vacuum(rng):
        vac = bethe.PseudoVacuum(n, ctx.c, p)

        def worst(q, u):
            res = []
            for name in ("C1", "C2", "C3"):
                res.append(float(np.abs(named_generator(module, name, u, p).apply(vac, q)).max()))
            return max(res) / abs(vac.f(q))
        return k, _max_over(generic_samples(rng, 2, k, worst, p))

    def eigen(rng):
        vac = bethe.PseudoVacuum(n, ctx.c, p)
        e = p.eta

        def worst(q, u):
            f = vac.f
            want = {"A1": bethe.vacuum_eigenvalue(1, q, u, module, p) * f(q - 2 * e),
                    "A2": bethe.vacuum_eigenvalue(2, q, u, module, p) * f(q),
                    "A3": bethe.vacuum_eigenvalue(3, q, u, module, p) * f(q + 2 * e)}
            res = []
            for name, val in want.items():
                got = named_generator(module, name, u, p).apply(vac, q)
                ref = np.zeros(module.dim, dtype=complex)
                ref[0] = val
                res.append(float(np.abs(got - ref).max()) / abs(val))
            return max(res)
        return k, _max_over(generic_samples(rng, 2, k, worst, p))

    out.append(_record(ctx, "bethe.vacuum_annihilation", 1e-12, vacuum))
    out.append(_record(ctx, "bethe.vacuum_eigenvalues", 1e-10, eigen))

    if n >= 2:
        def symmetry(rng):
            worst = 0.0
            for _ in range(k_small):
                us = _random_roots(rng, n, p)
                q = complex(cell_points(rng, 1, p)[0])
                for i in range(1, n):
                    worst = max(worst, bethe.phi_symmetry_residual(module, us, i, q, p))
            return k_small, worst

        def involution(rng):
            worst = 0.0
            for _ in range(k_small):
                us = _random_roots(rng, n, p)
                q = complex(cell_points(rng, 1, p)[0])
                w = rm.omega_closed(us[1] - us[0], p) * rm.omega_closed(us[0] - us[1], p)
                base = bethe.phi(module, us, p)
                worst = max(worst, opalg.shift_residual(base, opalg.scale(w, base), q))
            return k_small, worst

        out.append(_record(ctx, "bethe.phi_symmetry", 1e-9, symmetry))
        out.append(_record(ctx, "bethe.phi_double_swap", 1e-11, involution))

    def a1_action(rng):
        worst = 0.0
        for _ in range(k_small):
            us = _random_roots(rng, n, p)
            u, q = (complex(v) for v in cell_points(rng, 2, p))
            worst = max(worst, bethe.a1_action_residual(module, u, us, q, p))
        return k_small, worst

    def ab(rng):
        return k, _max_over(generic_samples(
            rng, 2, k, lambda q, u: bethe.alpha_beta_identity_residual(q, u, p), p))

    def six(rng):
        return k, _max_over(generic_samples(
            rng, 4, k, lambda q, u, a, b: bethe.k2_identity_residual(q, u, a, b, p), p))

    out.append(_record(ctx, "bethe.a1_action", 1e-8, a1_action))
    out.append(_record(ctx, "bethe.alpha_beta_identity", 1e-9, ab))
    out.append(_record(ctx, "bethe.k2_identity", 1e-9, six))
    out.extend(pipeline_records(ctx, system))
    return out


def pipeline_records(ctx: SuiteContext, system: Optional[bethe.BetheSystem] = None) -> list:
    """Solve (unless given), then eigencheck, K cancellation, Lambda forms and a negative control."""
    p = ctx.params
    module = ctx.module
    k = min(ctx.samples, 5)
    tol_solve = ctx.tolerance(1e-10)
    if system is None:
        try:
            system = bethe.solve_bethe(module.n, ctx.z, ctx.c, params=p, seed=ctx.seed)
        except NoConvergence as exc:
            return [CheckRecord("bethe.solve", 0, float(exc.best_residual), tol_solve, False, str(exc))]
        except EllqgError as exc:
            return [CheckRecord("bethe.solve", 0, float("inf"), tol_solve, False, str(exc))]
    roots = list(system.roots)
    out = [CheckRecord("bethe.solve", 1, system.residual_norm, tol_solve,
                       system.residual_norm < tol_solve, f"restarts={system.restarts_used}")]

    def eig(rng):
        got = generic_samples(rng, 2, k, lambda u, q: bethe.eigencheck(module, system, u, [q], p), p)
        return k, _max_over(got)

    def unwanted(rng):
        got = generic_samples(rng, 2, k, lambda u, q: max(
            abs(v) for v in bethe.unwanted_coefficients(module, roots, system.c, u, q, p).values()), p)
        return k, _max_over(got)

    def forms(rng):
        def worst(u):
            lam = bethe.eigenvalue_lambda(u, roots, module.z, system.c, p)
            vals = [bethe.eigenvalue_general(u, roots, module, system.c, q, p)
                    for q in cell_points(rng, 5, p)]
            return max(abs(v - lam) for v in vals) / abs(lam)
        return k, _max_over(generic_samples(rng, 1, k, worst, p))

    def negative(rng):
        def res(u, q, *us):
            try:
                return _offshell(u, q, us)
            except ZeroVector as exc:
                raise PoleError(str(exc)) from None

        def _offshell(u, q, us):
            return bethe.eigencheck(module, bethe.BetheSystem(module.n, module.z, system.c, us, 0.0, 0,
                                                              params=p), u, [q], p)
        got = generic_samples(rng, 2 + module.n, k, res, p)
        smallest = min(r for _, r in got)
        return k, smallest

    out.append(_record(ctx, "bethe.eigencheck", 1e-7, eig))
    out.append(_record(ctx, "bethe.unwanted_terms", 1e-8, unwanted))
    out.append(_record(ctx, "bethe.lambda_general_vs_explicit", 1e-9, forms))
    neg = _record(ctx, "bethe.negative_control", 1e-2, negative)
    # passes when the off-shell residual stays large
    neg.passed = bool(np.isfinite(neg.max_residual) and neg.max_residual > neg.tolerance)
    neg.detail = "min off-shell residual; must exceed tolerance"
    out.append(neg)
    return out


_SUITE_FUNCS = {"theta": theta_suite, "rmatrix": rmatrix_suite, "lax": lax_suite,
                "opalg": opalg_suite, "bethe": bethe_suite}


def run_suite(name: str, ctx: SuiteContext) -> list:
    names = SUITES if name == "all" else (name,)
    records = []
    for s in names:
        records.extend(_SUITE_FUNCS[s](ctx))
    return sorted(records, key=lambda r: r.check_name)
