"""Aggregated invariant suite behind the ``verify`` command.

Each check returns a dict with ``name``, ``passed``, a numeric ``measure``,
its ``threshold`` and a one-line ``detail``; the command serializes them as
JSON and uses the failure count as its exit code.
"""

import numpy as np

from . import hilbert, oracle, resolvent, spectrum
from .errors import BvtpError, NearEigenvalue
from .hilbert import EndpointData
from .ivp import ValuePair
from .problem import ValidatedProblem
from .solutions import characteristic_detail, solution_pair

_IVP_TOL = 1e-12
_SEED = 20260810


def _check(name, measure, threshold, detail=""):
    return {
        "name": name,
        "passed": bool(measure < threshold),
        "measure": float(measure),
        "threshold": float(threshold),
        "detail": detail,
    }


def _skip(name, detail):
    return {"name": name, "passed": True, "measure": 0.0, "threshold": 0.0,
            "detail": f"skipped: {detail}"}


def _error(name, exc):
    return {"name": name, "passed": False, "measure": float("inf"),
            "threshold": 0.0, "detail": f"{type(exc).__name__}: {exc}"}


def _nonresonant(problem, candidates):
    """First candidate lambda safely away from the spectrum."""
    for lam in candidates:
        w = characteristic_detail(problem, lam, _IVP_TOL).omega
        if abs(w) > 10 * resolvent.near_eigenvalue_threshold(lam):
            return lam
    raise NearEigenvalue("no non-resonant probe value found")


def _window_with_roots(problem, count, tol):
    for hi in (200.0, 800.0, 3200.0):
        spec = spectrum.eigenvalues(problem, (-10.0, hi), tol=tol, ivp_tol=_IVP_TOL)
        if len(spec.eigenvalues) >= count:
            return spec
    return spec


def check_wronskian_recursion(problem, n_lambdas=20):
    if problem.n == 0:
        return _skip("wronskian_recursion", "no interfaces")
    rng = np.random.default_rng(_SEED)
    lams = list(rng.uniform(-10, 100, n_lambdas)) + [3j, -3j, 1 + 2j]
    worst = 0.0
    for lam in lams:
        detail = characteristic_detail(problem, lam, _IVP_TOL)
        worst = max(worst, detail.max_recursion_violation)
    return _check("wronskian_recursion", worst, 1e-9,
                  f"{len(lams)} lambda values, tol {_IVP_TOL:g}")


def check_boundary_identities(problem, n_data=100):
    rng = np.random.default_rng(_SEED + 1)
    worst = 0.0
    for _ in range(n_data):
        fa, fb, ga, gb = rng.standard_normal((4, 2)) * 2.0
        f = EndpointData(ValuePair(*fa), ValuePair(*fb))
        g = EndpointData(ValuePair(*ga), ValuePair(*gb))
        ra, rb = hilbert.boundary_identity_check(problem, f, g)
        worst = max(worst, ra, rb)
    return _check("boundary_identities", worst, 1e-12,
                  f"{n_data} random endpoint datasets")


def check_transmission_identity(problem, n_lambdas=10):
    if problem.n == 0:
        return _skip("transmission_identity", "no interfaces")
    rng = np.random.default_rng(_SEED + 2)
    worst = 0.0
    for lam in rng.uniform(-10, 60, n_lambdas):
        phi, chi = solution_pair(problem, float(lam), _IVP_TOL)
        for i in range(1, problem.n + 1):
            worst = max(worst, hilbert.wronskian_transmission_identity(
                problem, phi, chi, i))
    return _check("transmission_identity", worst, 1e-9,
                  f"{n_lambdas} lambda values, all interfaces")


def check_orthogonality_gram(problem, count=4, tol=1e-11):
    spec = _window_with_roots(problem, count, tol)
    if len(spec.eigenvalues) < count:
        return _error("orthogonality_gram",
                      BvtpError(f"found only {len(spec.eigenvalues)} eigenvalues"))
    psis = [spectrum.eigenfunction(problem, lam, tol, ivp_tol=_IVP_TOL)
            for lam in spec.eigenvalues[:count]]
    worst = 0.0
    for j in range(count):
        for k in range(count):
            g = hilbert.check_orthogonality(problem, psis[j], psis[k])
            worst = max(worst, abs(g - (1.0 if j == k else 0.0)))
    return _check("orthogonality_gram", worst, 1e-5,
                  f"first {count} eigenfunctions")


def check_resolvent_residuals(problem):
    one = lambda xs: np.ones_like(np.asarray(xs, dtype=float))
    lam = _nonresonant(problem, (-1.0, -1.37, -2.11, -3.29))
    sol = resolvent.solve_resolvent(problem, lam, one)
    worst_rel = max(sol.residual_ode / 1e-6, sol.residual_bc / 1e-6,
                    (sol.residual_trans / 1e-7) if problem.n else 0.0)
    return _check("resolvent_residuals", worst_rel, 1.0,
                  f"lambda = {lam:g}, f = 1: ode {sol.residual_ode:.2e}, "
                  f"bc {sol.residual_bc:.2e}, trans {sol.residual_trans:.2e}")


def check_oracle_agreement(problem, count=3, nodes=100):
    osp = oracle.oracle_eigenvalues(problem, nodes, count, levels=2)
    spec = _window_with_roots(problem, count, 1e-11)
    if len(spec.eigenvalues) < len(osp.values):
        return _error("oracle_agreement",
                      BvtpError("shooting spectrum shorter than oracle's"))
    worst = 0.0
    for sh, ov, est in zip(spec.eigenvalues, osp.values, osp.error_estimates):
        worst = max(worst, abs(sh - ov) / est)
    return _check("oracle_agreement", worst, 1.0,
                  f"first {len(osp.values)} eigenvalues vs pencil at "
                  f"N = {nodes}/{2 * nodes}, measured in oracle error units")


def check_kernel_symmetry(problem, grid=8):
    lam = _nonresonant(problem, (-2.0, -2.41, -3.17, -4.53))
    a, b = problem.a, problem.b
    span = b - a
    xs = np.linspace(a + 0.03 * span, b - 0.03 * span, grid)
    # keep probe points off the interfaces
    for xi in problem.xi:
        xs = np.where(np.abs(xs - xi) < 0.01 * span, xs + 0.017 * span, xs)
    V = problem.interval_weights
    worst = 0.0
    for x in xs:
        for y in xs:
            if x == y:
                continue
            g_xy = resolvent.greens(problem, lam, float(x), float(y), tol=_IVP_TOL)
            g_yx = resolvent.greens(problem, lam, float(y), float(x), tol=_IVP_TOL)
            wx = V[problem.containing_interval(float(x)) - 1] * g_xy
            wy = V[problem.containing_interval(float(y)) - 1] * g_yx
            worst = max(worst, abs(wx - wy) / max(abs(wx), abs(wy)))
    return _check("kernel_symmetry", worst, 1e-8,
                  f"lambda = {lam:g}, {grid}x{grid} off-interface grid")


def check_selfadjointness(problem):
    one = lambda xs: np.ones_like(np.asarray(xs, dtype=float))
    ident = lambda xs: np.asarray(xs, dtype=float)
    lam = _nonresonant(problem, (-1.0, -1.37, -2.11, -3.29))
    r = resolvent.resolvent_selfadjointness_check(problem, lam, one, ident)
    return _check("resolvent_selfadjointness", r, 1e-6, f"lambda = {lam:g}, f=1, g=x")


_ALL_CHECKS = (
    check_wronskian_recursion,
    check_boundary_identities,
    check_transmission_identity,
    check_orthogonality_gram,
    check_resolvent_residuals,
    check_oracle_agreement,
    check_kernel_symmetry,
    check_selfadjointness,
)


def run_all(problem: ValidatedProblem, fast: bool = False):
    """Run every invariant check; returns the list of result dicts."""
    results = []
    for fn in _ALL_CHECKS:
        if fast and fn is check_oracle_agreement:
            results.append(_skip("oracle_agreement", "fast mode"))
            continue
        try:
            results.append(fn(problem))
        except BvtpError as exc:
            results.append(_error(fn.__name__.removeprefix("check_"), exc))
    return results
