import numpy as np
import pytest

from ellqg import bethe, opalg, rmatrix as rm
from ellqg.errors import ModuleMismatch
from ellqg.operators import QFunction
from ellqg.representation import build_module, named_generator
from ellqg.sampling import generic_samples
from ellqg.theta import ModularParams
from oracles import lax_block

Q = 0.33 + 0.17j
U1, U2 = 0.21 + 0.05j, -0.13 + 0.11j


def random_psi(rng, dim):
    # a smooth W-valued test function
    a, b = rng.normal(size=(2, dim)) + 1j * rng.normal(size=(2, dim))
    return QFunction(lambda q: a * np.exp(0.7 * q) + b * np.cos(1.3 * q))


@pytest.fixture
def m2():
    return build_module([0.1, 0.45])


def test_identity_is_neutral(params, rng, m2):
    x = named_generator(m2, "B2", U1, params)
    psi = random_psi(rng, m2.dim)
    ident = opalg.identity(m2, params)
    for q in (0.1 + 0.2j, -0.3 + 0.1j, 0.25, 0.4 - 0.3j, -0.1j):
        assert np.allclose(opalg.apply(ident @ x, psi, q), opalg.apply(x, psi, q), rtol=1e-14, atol=0)
        assert np.allclose(opalg.apply(x @ ident, psi, q), opalg.apply(x, psi, q), rtol=1e-14, atol=0)


def test_shift_bookkeeping(params, m2):
    b2, a1 = named_generator(m2, "B2", U1, params), named_generator(m2, "A1", U2, params)
    assert (b2 @ a1).shifts == [0]
    prod = named_generator(m2, "B2", U1, params) @ named_generator(m2, "B2", U2, params) @ a1
    assert prod.shifts == [1]
    t = opalg.transfer_matrix(m2, U1, params)
    assert t.shifts == [-1, 0, 1]
    assert (t @ t).shifts == [-2, -1, 0, 1, 2]


def test_composition_against_stepwise_application(params, rng, m2):
    # (A1(u1) B1(u2) psi)(q) = L11(q,u1) [L12(q-2eta,u2) psi(q-2eta)]
    psi = random_psi(rng, m2.dim)
    op = named_generator(m2, "A1", U1, params) @ named_generator(m2, "B1", U2, params)
    e = params.eta
    for q in (Q, 0.12 - 0.2j, -0.31 + 0.05j):
        inner = lax_block(m2.z, q - 2 * e, U2, 1, 2, params) @ psi(q - 2 * e)
        ref = lax_block(m2.z, q, U1, 1, 1, params) @ inner
        got = opalg.apply(op, psi, q)
        assert np.abs(got - ref).max() / np.abs(ref).max() < 1e-12


def test_scale_trivial_factors(params, rng, m2):
    x = named_generator(m2, "A2", U1, params)
    psi = random_psi(rng, m2.dim)
    assert np.array_equal(opalg.apply(opalg.scale(1.0, x), psi, Q), opalg.apply(x, psi, Q))
    assert not np.any(opalg.apply(opalg.scale(lambda q: 0.0, x), psi, Q))


def test_scale_reproduces_second_phi2_term(params, m2):
    term = opalg.scale(lambda q: 1 / rm.y(q, U1 - U2, params),
                       named_generator(m2, "B2", U1, params) @ named_generator(m2, "A1", U2, params))
    direct = named_generator(m2, "B1", U1, params) @ named_generator(m2, "B1", U2, params) - term
    assert opalg.shift_residual(bethe.phi(m2, [U1, U2], params), direct, Q) < 1e-14


def test_scale_acts_before_shift(params, m2):
    x = named_generator(m2, "A1", U1, params)
    f = lambda q: np.exp(q)  # noqa: E731
    (coef,) = opalg.scale(f, x).coefficients(Q).values()
    (base,) = x.coefficients(Q).values()
    assert np.allclose(coef, np.exp(Q) * base, rtol=1e-15)


def test_a1_on_vacuum(params):
    m = build_module([0.1, 0.45])
    vac = bethe.PseudoVacuum(2, 0.0, params)
    got = opalg.apply(named_generator(m, "A1", U1, params), vac, Q)
    ref = bethe.vacuum_eigenvalue(1, Q, U1, m, params) * vac(Q - 2 * params.eta)
    assert np.abs(got - ref).max() / np.abs(ref).max() < 1e-13


def test_b1_on_vacuum_matches_lax_entry(params, m2):
    vac = bethe.PseudoVacuum(2, 0.3, params)
    got = opalg.apply(named_generator(m2, "B1", U1, params), vac, Q)
    ref = lax_block(m2.z, Q, U1, 1, 2, params) @ vac(Q)
    assert np.abs(got - ref).max() / np.abs(ref).max() < 1e-13


def test_transfer_vacuum_component_single_site(params):
    m = build_module([0.3])
    f = lambda q: np.exp(0.2 * q) * np.sin(q + 0.4)  # noqa: E731
    psi = QFunction(lambda q: np.array([f(q), 0, 0]))
    e = params.eta
    got = opalg.apply(opalg.transfer_matrix(m, U1, params), psi, Q)[0]
    ref = (bethe.vacuum_eigenvalue(1, Q, U1, m, params) * f(Q - 2 * e)
           + bethe.vacuum_eigenvalue(2, Q, U1, m, params) * f(Q)
           + bethe.vacuum_eigenvalue(3, Q, U1, m, params) * f(Q + 2 * e))
    assert abs(got - ref) / abs(ref) < 1e-13


def test_transfer_single_site_zero_weight_is_scalar(params):
    # on W[0] = span(e2) the three coefficients are R entries at (e_i e2, e_i e2)
    m = build_module([0.3])
    x = U1 - 0.3
    e = params.eta
    coeffs = opalg.transfer_matrix(m, U1, params).coefficients(Q)
    assert abs(coeffs[-1][1, 1] - rm.beta(e, Q, x, params)) < 1e-14
    assert abs(coeffs[0][1, 1] - rm.epsilon(Q, x, params)) < 1e-14
    assert abs(coeffs[1][1, 1] - rm.beta(e, -Q, x, params)) < 1e-14


def test_transfer_preserves_zero_weight(params, rng):
    for z in ([0.3], [0.1, 0.45], [0.1, 0.45, 0.7]):
        m = build_module(z)
        assert opalg.preserves_zero_weight(m, U1, Q, params)
        w0 = list(m.zero_weight_indices)
        coef = rng.normal(size=len(w0)) + 1j * rng.normal(size=len(w0))

        def psi_fn(q):
            v = np.zeros(m.dim, dtype=complex)
            v[w0] = coef * np.exp(q)
            return v

        psi = QFunction(psi_fn, weight=0)
        t = opalg.transfer_matrix(m, U2, params)
        for q in (Q, 0.1j, -0.2 + 0.1j, 0.45, 0.05 - 0.3j):
            out = opalg.apply(t, psi, q)
            mask = np.ones(m.dim, dtype=bool)
            mask[w0] = False
            assert not np.any(out[mask])


@pytest.mark.parametrize("rid", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("z", [(0.3,), (0.1, 0.45)])
def test_commutation_relations(params, rng, rid, z):
    m = build_module(z)
    got = generic_samples(rng, 3, 20, lambda q, a, b: opalg.commutation_residual(rid, a, b, q, m, params),
                          params)
    assert max(r for _, r in got) < 1e-8


def test_relation_three_swapped_arguments_fail(params, m2):
    # negative control: A1(u2) in the g term and A1(u1) in the delta term
    e = params.eta
    u21 = U2 - U1

    def gen(n, u):
        return named_generator(m2, n, u, params)

    lhs = gen("A1", U1) @ gen("B2", U2)
    inner = (opalg.scale(rm.g(u21, params), gen("B2", U2) @ gen("A1", U2))
             + opalg.scale(lambda q: rm.gamma(e, -q, u21, params), gen("B1", U1) @ gen("B1", U2))
             - opalg.scale(lambda q: rm.delta(-q, u21, params), gen("B2", U1) @ gen("A1", U1)))
    rhs = opalg.scale(lambda q: 1 / rm.gamma(q, -q, u21, params), inner)
    assert opalg.shift_residual(lhs, rhs, Q) > 1e-2


def test_unknown_relation(params, m2):
    with pytest.raises(ValueError):
        opalg.commutation_residual(6, U1, U2, Q, m2, params)


def test_transfer_commutes(params):
    m1 = build_module([0.3])
    assert opalg.transfer_commute_residual(m1, U1, U1, Q, params) == 0
    assert opalg.transfer_commute_residual(m1, U1, U2, Q, params) < 1e-10
    m2 = build_module([0.1, 0.45])
    assert opalg.transfer_commute_residual(m2, U1, U2, Q, params) < 1e-9


def test_associativity(params, rng, m2):
    a, b, c = (named_generator(m2, n, u, params) for n, u in (("A1", U1), ("B2", U2), ("B1", 0.4j)))
    psi = random_psi(rng, m2.dim)
    for q in (Q, 0.1j, -0.2 + 0.1j, 0.45, 0.05 - 0.3j):
        x = opalg.apply((a @ b) @ c, psi, q)
        y = opalg.apply(a @ (b @ c), psi, q)
        assert np.abs(x - y).max() / np.abs(x).max() < 1e-11


def test_merge_preserves_action(params, rng, m2):
    t = opalg.transfer_matrix(m2, U1, params)
    op = t @ t + t
    merged = op.merged()
    assert len(merged.terms) == len(set(s for _, s in op.terms)) < len(op.terms)
    psi = random_psi(rng, m2.dim)
    for q in (Q, 0.1j, -0.2 + 0.1j):
        x, y = opalg.apply(op, psi, q), opalg.apply(merged, psi, q)
        assert np.abs(x - y).max() / np.abs(x).max() < 1e-12


def test_module_mismatch(params):
    a = named_generator(build_module([0.1]), "A1", U1, params)
    b = named_generator(build_module([0.2]), "A1", U1, params)
    with pytest.raises(ModuleMismatch):
        a @ b
    c = named_generator(build_module([0.1]), "A1", U1, ModularParams(tau=0.9j))
    with pytest.raises(ModuleMismatch):
        a + c


def test_lowering_weight_support(params, m2):
    # B1 lowers weight by one, B2 by two, on a function of definite weight
    w = m2.weight
    for name, drop in (("B1", 1), ("B2", 2)):
        for weight in (2, 1, 0):
            idx = np.nonzero(w == weight)[0]
            psi = QFunction(lambda q, idx=idx: np.where(np.isin(np.arange(m2.dim), idx), np.exp(q), 0),
                            weight=weight)
            out = opalg.apply(named_generator(m2, name, U1, params), psi, Q)
            assert set(np.nonzero(np.abs(out) > 0)[0]) <= set(np.nonzero(w == weight - drop)[0])
