import numpy as np
import pytest

from ellqg import rmatrix as rm
from ellqg.errors import PoleError
from ellqg.sampling import cell_points, generic_samples
from ellqg.tensor import embed
from ellqg.theta import ModularParams
from oracles import shifted_r_bruteforce, theta_naive


def test_g_at_zero(params):
    assert abs(rm.g(0, params) - 1) < 1e-14


def test_beta_vanishes_at_zero(params):
    assert abs(rm.beta(0.3 + 0.1j, -0.2 + 0.05j, 0, params)) < 1e-15


def test_omega_independent_of_q(params, rng):
    u = 0.23 + 0.04j
    vals = [rm.omega(q, u, params) for q in cell_points(rng, 10, params)]
    closed = rm.omega_closed(u, params)
    assert max(abs(v - closed) for v in vals) / abs(closed) < 1e-11


def test_omega_inversion(params, rng):
    for u in cell_points(rng, 20, params):
        assert abs(rm.omega_closed(u, params) * rm.omega_closed(-u, params) - 1) < 1e-11


def test_r_at_zero_is_permutation(params):
    r = rm.build_r(0.31 + 0.2j, 0, params)
    assert np.abs(r.entries - rm.PERMUTATION).max() < 1e-12
    assert r.u == 0


def test_entry_11_against_theta_oracle():
    p = ModularParams(tau=0.8j, eta=0.11 + 0.03j)
    q, u = 0.31 + 0.2j, 0.17 - 0.05j
    e = p.eta
    g_ref = (theta_naive(u - e, p.tau) * theta_naive(u - 2 * e, p.tau)
             / (theta_naive(e, p.tau) * theta_naive(2 * e, p.tau)))
    r = rm.r_matrix(q, u, p)
    assert abs(r[0, 0] - g_ref) / abs(g_ref) < 1e-13
    assert abs(r[8, 8] - g_ref) / abs(g_ref) < 1e-13


def test_structural_pattern(params, rng):
    # the zero-weight sectors of V (x) V admit 1 + 4 + 9 + 4 + 1 = 19 entries
    assert len(set(rm.NONZERO_PATTERN)) == 19
    mask = np.zeros((9, 9), dtype=bool)
    for rc in rm.NONZERO_PATTERN:
        mask[rc] = True
    for q, u in zip(*(cell_points(rng, 10, params) for _ in range(2))):
        m = rm.r_matrix(q, u, params)
        assert not np.any(m[~mask])
        assert np.all(m[mask] != 0)
        assert rm.zero_weight_violation(m, 2) == 0
        assert np.array_equal(rm.H_TOTAL @ m - m @ rm.H_TOTAL, np.zeros((9, 9)))


def test_minus_signs_on_gamma_eta_terms(params):
    q, u = 0.21 + 0.13j, 0.17 - 0.05j
    m = rm.r_matrix(q, u, params)
    e = params.eta
    # E21 (x) E23 sits at row (e2 e2) = 4, column (e1 e3) = 2
    assert abs(m[4, 2] + rm.gamma(e, q, u, params)) < 1e-14
    assert abs(m[4, 6] + rm.gamma(e, -q, u, params)) < 1e-14


def test_r_matrix_is_read_only(params):
    m = rm.r_matrix(0.3, 0.2, params)
    with pytest.raises(ValueError):
        m[0, 0] = 1


def test_component_dispatch(params):
    u, q = 0.17 - 0.05j, 0.31 + 0.2j
    assert rm.component("g", [], u, params) == rm.g(u, params)
    assert rm.component(rm.ComponentName.GAMMA, [q, -q], u, params) == rm.gamma(q, -q, u, params)
    assert rm.component("omega", [], u, params) == rm.omega_closed(u, params)
    assert abs(rm.component("omega", [q], u, params) - rm.omega_closed(u, params)) < 1e-11
    with pytest.raises(TypeError):
        rm.component("alpha", [q], u, params)
    with pytest.raises(ValueError):
        rm.component("kappa", [], u, params)


def test_pole_error_names_denominator(params):
    with pytest.raises(PoleError, match="delta"):
        rm.delta(0.0, 0.3, params)
    with pytest.raises(PoleError):
        rm.unitarity_residual(0.0, 0.2, params)


def test_shift_blocks(params):
    q, u = 0.27 + 0.1j, 0.19 - 0.06j
    full = rm.r_dyn_shifted((0, 1), 2, q, u, 3, params)
    # leg 2 in e2 (lambda 0) and e1 (lambda 1)
    idx0 = [a * 9 + b * 3 + 1 for a in range(3) for b in range(3)]
    idx1 = [a * 9 + b * 3 + 0 for a in range(3) for b in range(3)]
    assert np.abs(full[np.ix_(idx0, idx0)] - rm.r_matrix(q, u, params)).max() < 1e-15
    assert np.abs(full[np.ix_(idx1, idx1)] - rm.r_matrix(q - 2 * params.eta, u, params)).max() < 1e-15


@pytest.mark.parametrize("pair,shift", [((0, 1), [2]), ((0, 2), [1]), ((1, 2), [0]), ((2, 0), []),
                                        ((1, 0), [2])])
def test_shifted_matches_bruteforce(params, pair, shift):
    q, u = 0.27 + 0.1j, 0.19 - 0.06j
    got = rm.r_dyn_shifted(pair, shift, q, u, 3, params)
    ref = shifted_r_bruteforce(pair[0], pair[1], shift, 3, q, u, params)
    assert np.abs(got - ref).max() < 1e-14


def test_shift_conjugation(params):
    # exp(-2 eta h3 d_q) R12(q) exp(2 eta h3 d_q) acts on the lambda block as R12(q - 2 eta lambda)
    q, u = 0.27 + 0.1j, 0.19 - 0.06j
    ref = np.zeros((27, 27), dtype=complex)
    for lam, state in zip((1, 0, -1), range(3)):
        proj = np.zeros((3, 3))
        proj[state, state] = 1
        ref += np.kron(rm.r_matrix(q - 2 * params.eta * lam, u, params), proj)
    assert np.abs(rm.r_dyn_shifted((0, 1), 2, q, u, 3, params) - ref).max() < 1e-15


def test_overlapping_legs_rejected(params):
    with pytest.raises(IndexError):
        rm.r_dyn_shifted((0, 1), 1, 0.2, 0.1, 3, params)
    with pytest.raises(IndexError):
        rm.r_dyn_shifted((0, 3), (), 0.2, 0.1, 3, params)
    with pytest.raises(IndexError):
        embed(lambda lam: np.eye(9), (1, 1), 3)


def test_unitarity(params, rng):
    assert rm.unitarity_residual(0.3 + 0.1j, 0, params) < 1e-14
    got = generic_samples(rng, 2, 50, lambda q, u: rm.unitarity_residual(q, u, params), params)
    assert max(r for _, r in got) < 1e-10


def test_dybe(params, rng):
    p = ModularParams(tau=0.8j, eta=0.12)
    assert rm.dybe_residual(0.4 + 0.1j, 0.23, -0.11 + 0.07j, p) < 1e-9
    assert rm.dybe_residual(0.4 + 0.1j, 0.23, 0.23, params) < 1e-10
    got = generic_samples(rng, 3, 50, lambda q, a, b: rm.dybe_residual(q, a, b, params), params)
    assert max(r for _, r in got) < 1e-9


def test_dybe_fails_without_dynamical_shift(params):
    # dropping the shift on the outer factors breaks the identity: a negative control
    q, u1, u2 = 0.4 + 0.1j, 0.23, -0.11 + 0.07j
    lhs = (rm.r_dyn_shifted((0, 1), (), q, u1 - u2, 3, params) @ rm.r_dyn_shifted((0, 2), (), q, u1, 3, params)
           @ rm.r_dyn_shifted((1, 2), (), q, u2, 3, params))
    rhs = (rm.r_dyn_shifted((1, 2), (), q, u2, 3, params) @ rm.r_dyn_shifted((0, 2), (), q, u1, 3, params)
           @ rm.r_dyn_shifted((0, 1), (), q, u1 - u2, 3, params))
    assert np.abs(lhs - rhs).max() / np.abs(lhs).max() > 1e-3
