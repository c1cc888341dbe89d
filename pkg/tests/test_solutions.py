import numpy as np
import pytest

from bvtp.ivp import ValuePair
from bvtp.solutions import (
    build_chi,
    build_phi,
    characteristic,
    characteristic_detail,
    chi_initial_data,
    omega_i,
    phi_initial_data,
    transmit_backward,
    transmit_forward,
)

from closedform import chi_p0, dchi_p0, dphi_p0, omega_p0, phi_p0
from conftest import random_problem


# ------------------------------------------------------------- jump maps

def test_continuity_matrix_is_transparent(P1):
    v = transmit_forward(P1, 1, ValuePair(3.7, -1.2))
    assert v.u == 3.7 and v.du == -1.2
    v = transmit_backward(P1, 1, ValuePair(3.7, -1.2))
    assert v.u == 3.7 and v.du == -1.2


def test_p2_forward_map(P2):
    v = transmit_forward(P2, 1, ValuePair(1.0, 0.0))
    assert abs(v.u - 2.0) < 1e-15 and abs(v.du) < 1e-15
    v = transmit_forward(P2, 1, ValuePair(0.0, 1.0))
    assert abs(v.u) < 1e-15 and abs(v.du - 0.5) < 1e-15


def test_p2_backward_map(P2):
    v = transmit_backward(P2, 1, ValuePair(2.0, 0.0))
    assert abs(v.u - 1.0) < 1e-15 and abs(v.du) < 1e-15


def test_jump_maps_satisfy_matching_functionals():
    rng = np.random.default_rng(3)
    for _ in range(20):
        prob = random_problem(rng, n=2)
        for i in (1, 2):
            left = ValuePair(*rng.uniform(-3, 3, 2))
            right = transmit_forward(prob, i, left)
            r1, r2 = prob.trans[i - 1].functionals(left.u, left.du,
                                                   right.u, right.du)
            scale = max(abs(left.u), abs(left.du), abs(right.u), abs(right.du), 1.0)
            assert abs(r1) < 1e-13 * scale and abs(r2) < 1e-13 * scale


def test_jump_maps_are_mutually_inverse(P1, P2):
    rng = np.random.default_rng(4)
    for prob in (P1, P2):
        for _ in range(10):
            v = ValuePair(*rng.uniform(-5, 5, 2))
            w = transmit_backward(prob, 1, transmit_forward(prob, 1, v))
            assert abs(w.u - v.u) < 1e-13 and abs(w.du - v.du) < 1e-13
            w = transmit_forward(prob, 1, transmit_backward(prob, 1, v))
            assert abs(w.u - v.u) < 1e-13 and abs(w.du - v.du) < 1e-13


# ---------------------------------------------------------- global builds

def test_phi_initial_data_encodes_left_condition(P0):
    # the initial data annihilate the left boundary functional for every lambda
    for lam in (0.0, 2.5, -4.0, 1 + 2j):
        v = phi_initial_data(P0, lam)
        d = P0.delta
        l1 = (d[0] - lam * d[2]) * v.u - (d[1] - lam * d[3]) * v.du
        assert abs(l1) == 0.0


def test_chi_initial_data_encodes_right_condition(P0):
    for lam in (0.0, 2.5, -4.0, 1 + 2j):
        v = chi_initial_data(P0, lam)
        g = P0.gamma
        l2 = (g[0] + lam * g[2]) * v.u - (g[1] + lam * g[3]) * v.du
        assert abs(l2) == 0.0


def test_phi_is_x_at_lambda_zero(P0):
    phi = build_phi(P0, 0.0)
    xs = np.linspace(0, 1, 11)
    vals = phi.eval_many(xs)
    assert np.max(np.abs(vals[0] - xs)) < 1e-9


def test_chi_is_x_minus_one_at_lambda_zero(P0):
    chi = build_chi(P0, 0.0)
    xs = np.linspace(0, 1, 11)
    vals = chi.eval_many(xs)
    assert np.max(np.abs(vals[0] - (xs - 1.0))) < 1e-9


def test_transparent_interface_reproduces_p0(P0, P1):
    lam = np.pi ** 2
    xs = np.linspace(0, 1, 50)
    for build in (build_phi, build_chi):
        s0 = build(P0, lam)
        s1 = build(P1, lam)
        v0 = s0.eval_many(xs)
        v1 = s1.eval_many(xs)
        assert np.max(np.abs(v0[0] - v1[0])) < 1e-8 * max(1, np.max(np.abs(v0[0])))


def test_phi_matches_closed_form_on_p0(P0):
    for lam in (0.5, 4.0, 25.0):
        phi = build_phi(P0, lam)
        xs = np.linspace(0, 1, 23)
        vals = phi.eval_many(xs)
        ref = phi_p0(xs, lam).real
        dref = dphi_p0(xs, lam).real
        scale = max(1.0, np.max(np.abs(ref)))
        assert np.max(np.abs(vals[0] - ref)) < 1e-8 * scale
        assert np.max(np.abs(vals[1] - dref)) < 1e-8 * scale


def test_chi_matches_closed_form_on_p0(P0):
    for lam in (0.5, 4.0, 25.0):
        chi = build_chi(P0, lam)
        xs = np.linspace(0, 1, 23)
        vals = chi.eval_many(xs)
        ref = chi_p0(xs, lam).real
        dref = dchi_p0(xs, lam).real
        scale = max(1.0, np.max(np.abs(ref)))
        assert np.max(np.abs(vals[0] - ref)) < 1e-8 * scale
        assert np.max(np.abs(vals[1] - dref)) < 1e-8 * scale


def test_p2_phi_jump_values(P2):
    # left piece is u'' = -u with phi(-1) = lambda = 1, phi'(-1) = 1
    lam = 1.0
    phi = build_phi(P2, lam)
    minus, plus = phi.one_sided_values[0]
    expect = np.cos(1.0) + np.sin(1.0)
    dexpect = -np.sin(1.0) + np.cos(1.0)
    assert abs(minus.u - expect) < 1e-9
    assert abs(minus.du - dexpect) < 1e-9
    assert plus.u == 2.0 * minus.u
    assert plus.du == 0.5 * minus.du


def test_p2_chi_jump_values(P2):
    # right piece: 4 u'' = -u, i.e. frequency 1/2, chi(1) = -1, chi'(1) = 1
    lam = 1.0
    chi = build_chi(P2, lam)
    minus, plus = chi.one_sided_values[0]
    expect = -np.cos(0.5) - 2.0 * np.sin(0.5)
    dexpect = -0.5 * np.sin(0.5) + np.cos(0.5)
    assert abs(plus.u - expect) < 1e-9
    assert abs(plus.du - dexpect) < 1e-9
    back = transmit_backward(P2, 1, plus)
    assert minus.u == back.u and minus.du == back.du


def test_transmission_functionals_on_built_solutions(P2):
    for lam in (0.0, 7.0, -3.0, 2 + 1j):
        for sol in (build_phi(P2, lam), build_chi(P2, lam)):
            for r1, r2, scale in sol.transmission_residuals():
                assert r1 < 1e-8 * max(scale, 1e-30)
                assert r2 < 1e-8 * max(scale, 1e-30)


def test_eval_at_interface_returns_stored_minus_side(P2):
    phi = build_phi(P2, 3.0)
    v = phi.eval(0.0)
    assert v == phi.one_sided_values[0][0]


# ------------------------------------------------------- omega and checks

def test_omega_is_one_at_lambda_zero(P0):
    assert abs(omega_i(P0, 0.0, 1) - 1.0) < 1e-10
    assert abs(characteristic(P0, 0.0) - 1.0) < 1e-10


def test_omega_matches_closed_form(P0):
    for lam in (0.5, 1.0, 4.0, 10.0, 25.0, 100.0):
        w = characteristic(P0, lam)
        ref = omega_p0(lam).real
        assert abs(w - ref) < 1e-8 * abs(ref)


def test_omega_sign_change_bracket(P0):
    # closed form: omega(0) = 1 > 0 and omega(2) < 0
    assert omega_p0(0.0).real > 0 > omega_p0(2.0).real
    assert characteristic(P0, 0.0) > 0 > characteristic(P0, 2.0)


def test_omega_recursion_on_p2(P2):
    detail = characteristic_detail(P2, 1.0)
    lhs = detail.omegas[1] * P2.theta(1, 1, 2)
    rhs = detail.omegas[0] * P2.theta(1, 3, 4)
    assert abs(lhs - rhs) < 1e-9 * abs(rhs)


def test_recursion_invariant_many_lambdas(P1, P2):
    rng = np.random.default_rng(5)
    lams = list(rng.uniform(-10, 100, 15)) + [3j, -3j, 1 + 2j]
    for prob in (P1, P2):
        for lam in lams:
            detail = characteristic_detail(prob, lam, tol=1e-12)
            assert detail.max_recursion_violation < 1e-9


def test_p1_matches_p0_at_random_lambdas(P0, P1):
    rng = np.random.default_rng(6)
    for lam in rng.uniform(-5, 50, 20):
        w0 = characteristic(P0, float(lam))
        w1 = characteristic(P1, float(lam))
        assert abs(w0 - w1) < 1e-8 * abs(w0)


def test_omega_conjugate_symmetry(P2):
    for lam in (1 + 2j, -3 + 0.5j, 10 + 10j):
        w = characteristic_detail(P2, lam).omega
        wbar = characteristic_detail(P2, np.conj(lam)).omega
        assert abs(np.conj(w) - wbar) < 1e-9 * max(1.0, abs(w))


def test_recursion_on_random_problems():
    rng = np.random.default_rng(9)
    for _ in range(5):
        prob = random_problem(rng, n=2)
        for lam in rng.uniform(-5, 40, 3):
            detail = characteristic_detail(prob, float(lam), tol=1e-12)
            assert detail.max_recursion_violation < 1e-8
