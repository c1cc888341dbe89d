"""Green's kernel evaluation and the inhomogeneous solve by variation of
parameters.

For lambda away from the spectrum the solution of the inhomogeneous problem
with homogeneous boundary/interface conditions is assembled per subinterval m
from the two shooting solutions,

    u = chi_m(x) [ I_phi(x) / (rho_m^2 w_m) + sum_{s<m} J_phi_s / (rho_s^2 w_s) ]
      + phi_m(x) [ I_chi(x) / (rho_m^2 w_m) + sum_{s>m} J_chi_s / (rho_s^2 w_s) ],

where I_phi is the running integral of phi*f from the left edge of the
subinterval, I_chi the running integral of chi*f to the right edge, and J
the full-subinterval integrals.  Equivalently u(x) = integral of
G(x, y) f(y) dy with the kernel

    G(x, y) = phi(min) chi(max) / (rho_{s(y)}^2 w_{s(y)}),

whose 1/rho^2 factor (in the variable of y's subinterval) makes the two
forms agree and gives the kernel its V-weighted symmetry.  Residuals of the
returned solution are verified with an independent finite-difference second
derivative, never with the equation itself.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InterfacePoint, NearEigenvalue, QuadratureFailure
from .hilbert import (
    _GW,
    _GX,
    _initial_edges,
    _piece_values,
    _refine,
    inner_h1,
    norm_h1,
)
from .ivp import ValuePair
from .problem import ValidatedProblem
from .solutions import characteristic_detail

_NEAR_EIG_FACTOR = 1e-8
_CHECK_POINTS = 100
_FD_REL_STEP = 8e-3
_MAX_DOUBLINGS = 13


def near_eigenvalue_threshold(lam) -> float:
    # the boundary terms make omega grow ~ lambda^2, so the rejection
    # threshold scales the same way
    return _NEAR_EIG_FACTOR * max(1.0, abs(lam) ** 2)


def _check_away_from_spectrum(omega, lam):
    if abs(omega) < near_eigenvalue_threshold(lam):
        raise NearEigenvalue(
            f"|omega({lam})| = {abs(omega):.3e} below threshold "
            f"{near_eigenvalue_threshold(lam):.3e}")


@dataclass(frozen=True)
class GreensEvaluation:
    x: float
    y: float
    lam: complex
    value: complex
    pieces_used: tuple[int, int]


def _interface_guard(problem: ValidatedProblem, *points):
    scale = 1.0 + abs(problem.a) + abs(problem.b)
    for p in points:
        for xi in problem.xi:
            if abs(p - xi) < 1e-12 * scale:
                raise InterfacePoint(f"point {p:g} sits on interface {xi:g}")


def greens_detail(problem: ValidatedProblem, lam, x: float, y: float,
                  tol: float = 1e-10) -> GreensEvaluation:
    detail = characteristic_detail(problem, lam, tol)
    _check_away_from_spectrum(detail.omega, lam)
    _interface_guard(problem, x, y)
    m = problem.containing_interval(x)
    s = problem.containing_interval(y)
    w_s = detail.omegas[s - 1]
    rho2 = problem.rho2(s)
    if y <= x:
        val = detail.phi.piece(s).eval(y).u * detail.chi.piece(m).eval(x).u / (rho2 * w_s)
    else:
        val = detail.phi.piece(m).eval(x).u * detail.chi.piece(s).eval(y).u / (rho2 * w_s)
    return GreensEvaluation(x=float(x), y=float(y), lam=complex(lam),
                            value=val, pieces_used=(m, s))


def greens(problem: ValidatedProblem, lam, x: float, y: float,
           tol: float = 1e-10):
    """Green's kernel G(x, y; lambda); lambda must sit away from the
    spectrum and x, y off the interfaces."""
    return greens_detail(problem, lam, x, y, tol).value


# ------------------------------------------------------------ running sums

class _PanelIntegrals:
    """Adaptive composite-Gauss panels for one subinterval carrying running
    integrals of phi*f and chi*f, evaluable at arbitrary interior points."""

    def __init__(self, problem, detail, fvals, i, quad_tol):
        self.i = i
        lo, hi = problem.subinterval(i)
        self.lo, self.hi = lo, hi
        phi_tr = detail.phi.piece(i)
        chi_tr = detail.chi.piece(i)

        def integrand_phi(xs):
            return phi_tr.eval_many(xs)[0] * fvals(i, xs)

        def integrand_chi(xs):
            return chi_tr.eval_many(xs)[0] * fvals(i, xs)

        self._int_phi = integrand_phi
        self._int_chi = integrand_chi

        edges = _initial_edges(detail.phi, detail.chi, lo, hi, i)
        prev_p = self._panels(integrand_phi, edges).sum()
        prev_c = self._panels(integrand_chi, edges).sum()
        for _ in range(_MAX_DOUBLINGS):
            edges = _refine(edges)
            pp = self._panels(integrand_phi, edges)
            cc = self._panels(integrand_chi, edges)
            tp, tc = pp.sum(), cc.sum()
            scale = max(1.0, abs(tp), abs(tc))
            if max(abs(tp - prev_p), abs(tc - prev_c)) <= quad_tol * scale:
                break
            prev_p, prev_c = tp, tc
        else:
            raise QuadratureFailure(
                f"running integrals on subinterval {i} did not converge")
        self.edges = edges
        self.panel_phi = pp
        self.panel_chi = cc
        self.prefix_phi = np.concatenate([[0.0], np.cumsum(pp)])
        self.prefix_chi = np.concatenate([[0.0], np.cumsum(cc)])
        self.total_phi = self.prefix_phi[-1]
        self.total_chi = self.prefix_chi[-1]

    @staticmethod
    def _panels(fn, edges):
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * (edges[1:] - edges[:-1])
        xs = (mid[:, None] + half[:, None] * _GX[None, :]).ravel()
        vals = np.asarray(fn(xs)).reshape(len(mid), len(_GX))
        return (vals @ _GW) * half

    def _cumulative(self, integrand, prefix, xs):
        xs = np.asarray(xs, dtype=float)
        pos = np.searchsorted(self.edges, xs, side="right") - 1
        pos = np.clip(pos, 0, len(self.edges) - 2)
        lo = self.edges[pos]
        half = 0.5 * (xs - lo)
        mid = 0.5 * (xs + lo)
        nodes = mid[:, None] + half[:, None] * _GX[None, :]
        vals = np.asarray(integrand(nodes.ravel())).reshape(len(xs), len(_GX))
        return prefix[pos] + (vals @ _GW) * half

    def phi_from_left(self, xs):
        """integral of phi*f from the subinterval's left edge to each x."""
        return self._cumulative(self._int_phi, self.prefix_phi, xs)

    def chi_to_right(self, xs):
        """integral of chi*f from each x to the subinterval's right edge."""
        return self.total_chi - self._cumulative(self._int_chi, self.prefix_chi, xs)


class ResolventEvaluator:
    """Piecewise evaluation of the variation-of-parameters solution and its
    first derivative."""

    def __init__(self, problem, detail, fvals, quad_tol):
        self.problem = problem
        self.detail = detail
        n1 = problem.n + 1
        self.panels = [_PanelIntegrals(problem, detail, fvals, i, quad_tol)
                       for i in range(1, n1 + 1)]
        self.w = np.asarray(detail.omegas)
        self.rho2w = np.array([problem.rho2(i) * self.w[i - 1] for i in range(1, n1 + 1)])
        j_phi = np.array([p.total_phi for p in self.panels]) / self.rho2w
        j_chi = np.array([p.total_chi for p in self.panels]) / self.rho2w
        # sum_{s<m} J_phi_s and sum_{s>m} J_chi_s, indexable by m-1
        self.phi_below = np.concatenate([[0.0], np.cumsum(j_phi)[:-1]])
        self.chi_above = np.concatenate([np.cumsum(j_chi[::-1])[::-1][1:], [0.0]])

    def coefficients(self, i, xs):
        panel = self.panels[i - 1]
        A = panel.phi_from_left(xs) / self.rho2w[i - 1] + self.phi_below[i - 1]
        B = panel.chi_to_right(xs) / self.rho2w[i - 1] + self.chi_above[i - 1]
        return A, B

    def eval_pair_piece(self, i, xs):
        xs = np.asarray(xs, dtype=float)
        A, B = self.coefficients(i, xs)
        pv = self.detail.phi.piece(i).eval_many(xs)
        cv = self.detail.chi.piece(i).eval_many(xs)
        u = cv[0] * A + pv[0] * B
        du = cv[1] * A + pv[1] * B
        return u, du

    def eval_piece(self, i, xs):
        u, du = self.eval_pair_piece(i, xs)
        return np.stack([u, du])

    def eval_many(self, xs):
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        p = self.problem
        idx = np.minimum(np.searchsorted(np.asarray(p.xi), xs, side="left") + 1, p.n + 1)
        u = np.empty(xs.shape, dtype=complex)
        du = np.empty(xs.shape, dtype=complex)
        for i in range(1, p.n + 2):
            mask = idx == i
            if np.any(mask):
                ui, dui = self.eval_pair_piece(i, xs[mask])
                u[mask], du[mask] = ui, dui
        return u, du

    def value_at_a(self) -> ValuePair:
        u, du = self.eval_pair_piece(1, [self.problem.a])
        return ValuePair(u[0], du[0])

    def value_at_b(self) -> ValuePair:
        u, du = self.eval_pair_piece(self.problem.n + 1, [self.problem.b])
        return ValuePair(u[0], du[0])

    def one_sided(self, i):
        """(u, u') at xi_i- and xi_i+ from the stored one-sided shooting
        values and the exact running-sum coefficients."""
        phi_m, phi_p = self.detail.phi.one_sided_values[i - 1]
        chi_m, chi_p = self.detail.chi.one_sided_values[i - 1]
        A_minus = self.phi_below[i]           # = full integral up to xi_i
        B_minus = self.chi_above[i - 1]
        A_plus = self.phi_below[i]
        B_plus = self.chi_above[i - 1]
        minus = ValuePair(chi_m.u * A_minus + phi_m.u * B_minus,
                          chi_m.du * A_minus + phi_m.du * B_minus)
        plus = ValuePair(chi_p.u * A_plus + phi_p.u * B_plus,
                         chi_p.du * A_plus + phi_p.du * B_plus)
        return minus, plus


@dataclass(frozen=True)
class ResolventSolution:
    """Solution of (lambda I - L) u = f with homogeneous boundary and
    interface conditions, plus its verification residuals."""

    lam: complex
    u: ResolventEvaluator
    residual_ode: float
    residual_bc: float
    residual_trans: float
    f_sup: float

    def eval_piece(self, i, xs):
        return self.u.eval_piece(i, xs)

    def eval_many(self, xs):
        return self.u.eval_many(xs)


def _sup_norm(problem, fvals):
    out = 0.0
    for i in range(1, problem.n + 2):
        lo, hi = problem.subinterval(i)
        xs = np.linspace(lo, hi, 201)
        out = max(out, float(np.max(np.abs(fvals(i, xs)))))
    return out


def _ode_residual(problem, ev, fvals, lam):
    """sup |lambda u + rho^2 u'' - q u - f| over interior check points;
    u'' by five-point central finite differences on the returned solution."""
    worst = 0.0
    for i in range(1, problem.n + 2):
        lo, hi = problem.subinterval(i)
        h = _FD_REL_STEP * (hi - lo)
        xs = np.linspace(lo + 2.5 * h, hi - 2.5 * h, _CHECK_POINTS)
        stencil = np.concatenate([xs - 2 * h, xs - h, xs, xs + h, xs + 2 * h])
        u_all, _ = ev.eval_pair_piece(i, stencil)
        um2, um1, u0, up1, up2 = np.split(u_all, 5)
        d2 = (-up2 + 16 * up1 - 30 * u0 + 16 * um1 - um2) / (12 * h * h)
        qv = problem.q_eval(i, xs)
        res = lam * u0 + problem.rho2(i) * d2 - qv * u0 - fvals(i, xs)
        worst = max(worst, float(np.max(np.abs(res))))
    return worst


def _bc_residual(problem, ev, lam):
    d, g = problem.delta, problem.gamma
    va = ev.value_at_a()
    vb = ev.value_at_b()
    l1 = (d[0] - lam * d[2]) * va.u - (d[1] - lam * d[3]) * va.du
    l2 = (g[0] + lam * g[2]) * vb.u - (g[1] + lam * g[3]) * vb.du
    return max(abs(l1), abs(l2))


def _trans_residual(problem, ev):
    worst = 0.0
    for i in range(1, problem.n + 1):
        minus, plus = ev.one_sided(i)
        r1, r2 = problem.trans[i - 1].functionals(minus.u, minus.du, plus.u, plus.du)
        worst = max(worst, abs(r1), abs(r2))
    return worst


def solve_resolvent(problem: ValidatedProblem, lam, f,
                    tol: float = 1e-10, quad_tol: float | None = None,
                    ivp_tol: float | None = None) -> ResolventSolution:
    """Solve (lambda I - L) u = f for lambda off the spectrum.

    ``f`` may be a plain callable, a piecewise-evaluable object, or an
    augmented triple (only its function part enters).  The returned solution
    carries sup residuals of the differential equation (independent
    finite-difference check), the two boundary conditions and all interface
    conditions.
    """
    quad_tol = quad_tol if quad_tol is not None else max(1e-13, 0.01 * tol)
    ivp_tol = ivp_tol if ivp_tol is not None else max(1e-13, 0.01 * tol)
    lam_c = complex(lam)
    lam_v = lam_c if lam_c.imag != 0.0 else lam_c.real
    detail = characteristic_detail(problem, lam_v, ivp_tol)
    _check_away_from_spectrum(detail.omega, lam_v)

    fvals = _piece_values(f)
    ev = ResolventEvaluator(problem, detail, fvals, quad_tol)
    return ResolventSolution(
        lam=lam_c, u=ev,
        residual_ode=_ode_residual(problem, ev, fvals, lam_v),
        residual_bc=_bc_residual(problem, ev, lam_v),
        residual_trans=_trans_residual(problem, ev),
        f_sup=_sup_norm(problem, fvals),
    )


def resolvent_selfadjointness_check(problem: ValidatedProblem, lam: float, f, g,
                                    tol: float = 1e-10) -> float:
    """|<R f, g> - <f, R g>| / (||f|| ||g||) in the weighted integral inner
    product, for real lambda off the spectrum."""
    if complex(lam).imag != 0.0:
        raise ValueError("self-adjointness check needs real lambda")
    rf = solve_resolvent(problem, lam, f, tol)
    rg = solve_resolvent(problem, lam, g, tol)
    lhs = inner_h1(problem, rf, g).total
    rhs = inner_h1(problem, f, rg).total
    denom = norm_h1(problem, f) * norm_h1(problem, g)
    return float(abs(lhs - rhs) / denom)
