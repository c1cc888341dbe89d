import numpy as np
import pytest

from bvtp.errors import InterfacePoint, NearEigenvalue
from bvtp.hilbert import CombinedPieces, inner_h1
from bvtp.oracle import oracle_solve
from bvtp.resolvent import (
    greens,
    greens_detail,
    resolvent_selfadjointness_check,
    solve_resolvent,
)
from bvtp.solutions import characteristic
from bvtp.spectrum import eigenfunction, eigenvalues

ONE = lambda xs: np.ones_like(np.asarray(xs, dtype=float))
IVP_TOL = 1e-12


# ------------------------------------------------------------------ kernel

def test_greens_diagonal_continuity(P0):
    lam = -1.0
    g = greens(P0, lam, 0.5, 0.5)
    # both case formulas coincide on the diagonal
    from bvtp.solutions import solution_pair
    w = characteristic(P0, lam)
    phi, chi = solution_pair(P0, lam, 1e-10)
    expect = phi.eval(0.5).u * chi.eval(0.5).u / w
    assert abs(g - expect) < 1e-12 * abs(expect)


def test_greens_symmetry_single_interval(P0):
    lam = -1.0
    g1 = greens(P0, lam, 0.7, 0.3)
    g2 = greens(P0, lam, 0.3, 0.7)
    assert abs(g1 - g2) < 1e-8 * abs(g1)


def test_greens_weighted_symmetry_p2(P2):
    lam = -2.0
    V = P2.interval_weights
    g1 = greens(P2, lam, 0.5, -0.5)
    g2 = greens(P2, lam, -0.5, 0.5)
    lhs = V[1] * g1   # x = 0.5 lives on subinterval 2
    rhs = V[0] * g2   # x = -0.5 lives on subinterval 1
    assert abs(lhs - rhs) < 1e-8 * abs(lhs)


def test_greens_pieces_used(P2):
    det = greens_detail(P2, -2.0, 0.5, -0.5)
    assert det.pieces_used == (2, 1)


def test_greens_interface_point_rejected(P2):
    with pytest.raises(InterfacePoint):
        greens(P2, -2.0, 0.0, 0.5)


def test_near_eigenvalue_rejected(P0):
    spec = eigenvalues(P0, (0.0, 5.0), tol=1e-11, ivp_tol=IVP_TOL)
    lam1 = spec.eigenvalues[0]
    with pytest.raises(NearEigenvalue):
        greens(P0, lam1 + 1e-13, 0.3, 0.7)
    with pytest.raises(NearEigenvalue):
        solve_resolvent(P0, lam1 + 1e-13, ONE)


# ------------------------------------------------------------------- solve

@pytest.mark.parametrize("lam", [-1.0, -3.0])
def test_resolvent_residuals_p0(P0, lam):
    sol = solve_resolvent(P0, lam, ONE)
    assert sol.residual_ode < 1e-6 * sol.f_sup
    assert sol.residual_bc < 1e-6 * sol.f_sup
    assert sol.residual_trans == 0.0  # no interfaces


@pytest.mark.parametrize("lam", [-1.0, -3.0])
def test_resolvent_residuals_p2(P2, lam):
    sol = solve_resolvent(P2, lam, ONE)
    assert sol.residual_ode < 1e-6 * sol.f_sup
    assert sol.residual_bc < 1e-6 * sol.f_sup
    assert sol.residual_trans < 1e-7 * sol.f_sup


def test_resolvent_zero_rhs(P2):
    zero = lambda xs: np.zeros_like(np.asarray(xs, dtype=float))
    sol = solve_resolvent(P2, -1.0, zero)
    u, du = sol.eval_many(np.linspace(-1, 1, 21))
    assert np.max(np.abs(u)) == 0.0
    assert np.max(np.abs(du)) == 0.0


def _oracle_sup_diff(problem, sol, orc):
    # compare per subinterval so the duplicated interface nodes pick up
    # their own one-sided values
    worst = 0.0
    for i in range(1, problem.n + 2):
        u, _ = sol.u.eval_pair_piece(i, orc.grid[i - 1])
        worst = max(worst, float(np.max(np.abs(u.real - orc.values[i - 1]))))
    return worst


def test_resolvent_matches_oracle(P0):
    sol = solve_resolvent(P0, -1.0, ONE)
    orc = oracle_solve(P0, -1.0, ONE, 2000)
    assert _oracle_sup_diff(P0, sol, orc) < 1e-5


def test_resolvent_matches_oracle_p2(P2):
    sol = solve_resolvent(P2, -3.0, ONE)
    orc = oracle_solve(P2, -3.0, ONE, 2000)
    assert _oracle_sup_diff(P2, sol, orc) < 1e-5


def test_resolvent_polynomial_rhs(P2):
    f = lambda xs: np.asarray(xs, dtype=float) ** 2
    sol = solve_resolvent(P2, -2.5, f)
    assert sol.residual_ode < 1e-6 * sol.f_sup
    assert sol.residual_trans < 1e-7 * sol.f_sup


def test_resolvent_nonzero_potential():
    from bvtp.problem import ProblemSpec, TransmissionMatrix, validate_problem

    tm = TransmissionMatrix(row1=(1.0, 0.0, -0.5, 0.0),
                            row2=(0.0, 1.0, 0.0, -2.0))
    prob = validate_problem(ProblemSpec(
        a=-1.0, b=1.0, xi=(0.0,), rho=(1.0, 2.0),
        q=((1.0, 0.0, 2.0), (0.5, -1.0)),
        delta=(1.0, 0.0, 0.0, -1.0), gamma=(1.0, 0.0, 0.0, -1.0),
        trans=(tm,)))
    sol = solve_resolvent(prob, -2.0, ONE)
    assert sol.residual_ode < 1e-6
    assert sol.residual_bc < 1e-6
    assert sol.residual_trans < 1e-7


def test_pole_behavior(P0):
    # |omega| * sup|u| stays bounded approaching an eigenvalue: simple pole
    spec = eigenvalues(P0, (0.0, 5.0), tol=1e-11, ivp_tol=IVP_TOL)
    lam1 = spec.eigenvalues[0]
    xs = np.linspace(0, 1, 201)
    prods = []
    for j in range(2, 7):
        lam = lam1 + 10.0 ** (-j)
        w = abs(characteristic(P0, lam, 1e-12))
        sol = solve_resolvent(P0, lam, ONE)
        u, _ = sol.eval_many(xs)
        prods.append(w * float(np.max(np.abs(u))))
    assert max(prods) / min(prods) < 5.0


def test_spectral_form_agreement(P0):
    # projections onto eigenfunctions approach the direct solve
    lam = -5.0
    spec = eigenvalues(P0, (-5.0, 1200.0), tol=1e-11, ivp_tol=IVP_TOL)
    sol = solve_resolvent(P0, lam, ONE)
    psis = [eigenfunction(P0, l, 1e-11, ivp_tol=IVP_TOL)
            for l in spec.eigenvalues[:12]]
    cs = [complex(inner_h1(P0, ONE, p).total) for p in psis]
    residuals = []
    for N in (2, 4, 8, 12):
        terms = [(1.0, sol)] + [(-c / (lam - l), p) for c, l, p in
                                zip(cs[:N], spec.eigenvalues[:N], psis[:N])]
        diff = CombinedPieces(terms, mesh_source=psis[N - 1])
        r = float(np.sqrt(max(inner_h1(P0, diff, diff).total.real, 0.0)))
        residuals.append(r)
    assert all(a > b for a, b in zip(residuals, residuals[1:]))


# --------------------------------------------------------- self-adjointness

def test_selfadjointness_identical_arguments(P0):
    assert resolvent_selfadjointness_check(P0, -1.0, ONE, ONE) < 1e-14


def test_selfadjointness_p0(P0):
    x = lambda xs: np.asarray(xs, dtype=float)
    assert resolvent_selfadjointness_check(P0, -1.0, ONE, x) < 1e-6


def test_selfadjointness_p2(P2):
    x2 = lambda xs: np.asarray(xs, dtype=float) ** 2
    assert resolvent_selfadjointness_check(P2, -2.0, ONE, x2) < 1e-6


def test_selfadjointness_needs_real_lambda(P0):
    with pytest.raises(ValueError):
        resolvent_selfadjointness_check(P0, -1.0 + 1j, ONE, ONE)
