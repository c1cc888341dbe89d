import numpy as np
import pytest

from bvtp.errors import DomainMismatch
from bvtp.ivp import ValuePair, integrate_ivp, wronskian_at

TOL = 1e-10


def test_constant_solution(P0):
    tr = integrate_ivp(P0, 1, 0.0, "left", ValuePair(1.0, 0.0), TOL)
    xs = np.linspace(0, 1, 17)
    vals = tr.eval_many(xs)
    assert np.max(np.abs(vals[0] - 1.0)) < 10 * TOL
    assert np.max(np.abs(vals[1])) < 10 * TOL


def test_linear_solution(P0):
    tr = integrate_ivp(P0, 1, 0.0, "left", ValuePair(0.0, 1.0), TOL)
    xs = np.linspace(0, 1, 17)
    vals = tr.eval_many(xs)
    assert np.max(np.abs(vals[0] - xs)) < 10 * TOL


def test_sine_solution(P0):
    # u'' = -pi^2 u with u(0)=0, u'(0)=pi has solution sin(pi x)
    lam = np.pi ** 2
    tr = integrate_ivp(P0, 1, lam, "left", ValuePair(0.0, np.pi), TOL)
    xs = np.linspace(0, 1, 33)
    vals = tr.eval_many(xs)
    assert np.max(np.abs(vals[0] - np.sin(np.pi * xs))) < 10 * TOL
    assert np.max(np.abs(vals[1] - np.pi * np.cos(np.pi * xs))) < 10 * TOL


def test_backward_cosine_on_p2(P2):
    # right subinterval has coefficient 4, so lambda = 4 gives u'' = -u
    tr = integrate_ivp(P2, 2, 4.0, "right", ValuePair(1.0, 0.0), TOL)
    xs = np.linspace(0, 1, 21)
    vals = tr.eval_many(xs)
    assert np.max(np.abs(vals[0] - np.cos(xs - 1.0))) < 10 * TOL


def test_wronskian_of_identical_traces(P0):
    tr = integrate_ivp(P0, 1, 2.0, "left", ValuePair(1.0, 0.5), TOL)
    assert wronskian_at(tr, tr, 0.4) == 0.0


def test_wronskian_unit(P0):
    t1 = integrate_ivp(P0, 1, 0.0, "left", ValuePair(1.0, 0.0), TOL)
    t2 = integrate_ivp(P0, 1, 0.0, "left", ValuePair(0.0, 1.0), TOL)
    for x in np.linspace(0, 1, 9):
        assert abs(wronskian_at(t1, t2, float(x)) - 1.0) < 1e-9


def test_wronskian_constancy():
    from bvtp.fixtures import p0
    P0 = p0()
    tol = 1e-12
    t1 = integrate_ivp(P0, 1, np.pi ** 2, "left", ValuePair(1.0, 0.0), tol)
    t2 = integrate_ivp(P0, 1, np.pi ** 2, "left", ValuePair(0.0, 1.0), tol)
    ws = np.array([wronskian_at(t1, t2, float(x))
                   for x in np.linspace(0, 1, 20)])
    spread = (ws.max() - ws.min()) / abs(ws.mean())
    assert spread < 1e-9


def test_wronskian_domain_mismatch(P2):
    t1 = integrate_ivp(P2, 1, 1.0, "left", ValuePair(1.0, 0.0), TOL)
    t2 = integrate_ivp(P2, 2, 1.0, "left", ValuePair(1.0, 0.0), TOL)
    with pytest.raises(DomainMismatch):
        wronskian_at(t1, t2, 0.5)
    t3 = integrate_ivp(P2, 1, 2.0, "left", ValuePair(1.0, 0.0), TOL)
    with pytest.raises(DomainMismatch):
        wronskian_at(t1, t3, -0.5)


def test_linearity(P0):
    rng = np.random.default_rng(11)
    lam = 7.3
    i1, i2 = ValuePair(1.0, -0.4), ValuePair(0.2, 2.0)
    t1 = integrate_ivp(P0, 1, lam, "left", i1, TOL)
    t2 = integrate_ivp(P0, 1, lam, "left", i2, TOL)
    for _ in range(5):
        al, be = rng.uniform(-2, 2, 2)
        combo = ValuePair(al * i1.u + be * i2.u, al * i1.du + be * i2.du)
        t3 = integrate_ivp(P0, 1, lam, "left", combo, TOL)
        xs = np.linspace(0, 1, 13)
        lhs = t3.eval_many(xs)
        rhs = al * t1.eval_many(xs) + be * t2.eval_many(xs)
        scale = max(1.0, np.max(np.abs(rhs)))
        assert np.max(np.abs(lhs - rhs)) < 10 * TOL * scale


def test_reversibility(P2):
    init = ValuePair(0.7, -1.1)
    fwd = integrate_ivp(P2, 1, 12.0, "left", init, TOL)
    back = integrate_ivp(P2, 1, 12.0, "right", fwd.value_at_hi(), TOL)
    v = back.value_at_lo()
    assert abs(v.u - init.u) < 100 * TOL
    assert abs(v.du - init.du) < 100 * TOL


def test_conjugate_symmetry(P0):
    lam = 2.0 + 3.0j
    t = integrate_ivp(P0, 1, lam, "left", ValuePair(1.0, 0.0), TOL)
    tbar = integrate_ivp(P0, 1, np.conj(lam), "left", ValuePair(1.0, 0.0), TOL)
    xs = np.linspace(0, 1, 11)
    v = t.eval_many(xs)
    vbar = tbar.eval_many(xs)
    scale = max(1.0, np.max(np.abs(v)))
    assert np.max(np.abs(np.conj(v) - vbar)) < 10 * TOL * scale


def test_real_lambda_real_fast_path_matches_complex(P0):
    lam = 5.0
    tr = integrate_ivp(P0, 1, lam, "left", ValuePair(1.0, 0.0), TOL)
    tc = integrate_ivp(P0, 1, lam + 0j, "left", ValuePair(1.0 + 0j, 0.0), TOL)
    assert not np.iscomplexobj(tr.node_values)
    xs = np.linspace(0, 1, 11)
    assert np.max(np.abs(tr.eval_many(xs) - tc.eval_many(xs))) < 10 * TOL


def test_nodes_reproduced_exactly(P0):
    tr = integrate_ivp(P0, 1, 50.0, "left", ValuePair(0.3, 1.0), TOL)
    vals = tr.eval_many(tr.nodes)
    assert np.array_equal(vals, tr.node_values)
    v = tr.eval(float(tr.nodes[3]))
    assert v.u == tr.node_values[0, 3] and v.du == tr.node_values[1, 3]


def test_max_step_limits_mesh(P0):
    tr = integrate_ivp(P0, 1, 0.0, "left", ValuePair(1.0, 0.0), TOL)
    assert np.max(np.diff(tr.nodes)) <= 1.0 / 8 + 1e-12
    assert len(tr.nodes) >= 9


@pytest.mark.parametrize("lam", [np.pi ** 2, 100.0, -50.0, 3j])
def test_midpoint_ode_residual_within_advertised(P0, lam):
    tr = integrate_ivp(P0, 1, lam, "left", ValuePair(0.3, 1.1), TOL)
    bound = 20 * TOL * (1 + abs(lam)) * max(1.0, tr.magnitude())
    assert tr.max_midpoint_residual() < bound


def test_eval_outside_domain_raises(P0):
    tr = integrate_ivp(P0, 1, 1.0, "left", ValuePair(1.0, 0.0), TOL)
    with pytest.raises(DomainMismatch):
        tr.eval(1.5)


def test_bad_tol_rejected(P0):
    with pytest.raises(ValueError):
        integrate_ivp(P0, 1, 1.0, "left", ValuePair(1.0, 0.0), 0.0)
    with pytest.raises(ValueError):
        integrate_ivp(P0, 1, 1.0, "middle", ValuePair(1.0, 0.0), TOL)


def test_blow_up_reports_x_reached(P0):
    from bvtp.errors import IntegrationError, StepSizeUnderflow
    with pytest.raises(IntegrationError) as err:
        integrate_ivp(P0, 1, -1e9, "left", ValuePair(1.0, 0.0), TOL)
    if isinstance(err.value, StepSizeUnderflow):
        assert 0.0 <= err.value.x_reached <= 1.0
