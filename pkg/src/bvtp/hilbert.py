"""Weighted inner products, boundary functionals, the algebraic Wronskian
identities, orthogonality checks and eigenfunction expansion.

The working space is a direct sum: square-integrable pieces on the
subintervals plus one complex number per end point.  Its inner product uses
per-subinterval weights V_s (column-minor products over 1/rho_s^2) and
boundary weights built from the same minor products divided by kappa_1,
kappa_2.  Elements are triples (f, f1, f2); plain functions embed as
(f, 0, 0).
"""

from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import InsufficientEigenvalues, QuadratureFailure
from .ivp import ValuePair
from .problem import ValidatedProblem

_GAUSS_ORDER = 10
_GX, _GW = leggauss(_GAUSS_ORDER)

DEFAULT_QUAD_TOL = 1e-9
_MAX_DOUBLINGS = 13
_INITIAL_EDGE_CAP = 65


@dataclass(frozen=True)
class InnerProductReport:
    """Inner product split into its integral and boundary contributions."""

    h1_part: complex
    left_boundary_part: complex
    right_boundary_part: complex
    total: complex
    quadrature_error_estimate: float


@dataclass(frozen=True)
class ExpansionResult:
    coefficients: tuple
    truncation: int
    l2_residual: float
    eigenvalues: tuple


@dataclass(frozen=True)
class EndpointData:
    """Bare endpoint values, enough for the boundary functionals."""

    at_a: ValuePair
    at_b: ValuePair


# --------------------------------------------------------------- adapters

def _function_part(f):
    return f.f if hasattr(f, "f1") and hasattr(f, "f") else f


def _boundary_component(f, which: int):
    if hasattr(f, "f1"):
        return f.f1 if which == 1 else f.f2
    return 0.0


def _piece_values(f):
    """Return fn(i, xs) -> array of function values on subinterval i."""
    f = _function_part(f)
    if hasattr(f, "eval_piece"):
        return lambda i, xs: np.asarray(f.eval_piece(i, xs))[0]
    if callable(f):
        return lambda i, xs: np.asarray(f(np.asarray(xs)), dtype=complex) + 0.0
    raise TypeError(f"cannot evaluate {f!r} on subintervals")


def _as_value_pair(v) -> ValuePair:
    if isinstance(v, ValuePair):
        return v
    u, du = v
    return ValuePair(u, du)


def _endpoint_pairs(f) -> tuple[ValuePair, ValuePair]:
    """(values at a, values at b) for anything endpoint-evaluable."""
    if isinstance(f, EndpointData):
        return f.at_a, f.at_b
    f = _function_part(f)
    if isinstance(f, EndpointData):
        return f.at_a, f.at_b
    if hasattr(f, "value_at_a"):
        return f.value_at_a(), f.value_at_b()
    if isinstance(f, tuple) and len(f) == 2:
        return _as_value_pair(f[0]), _as_value_pair(f[1])
    raise TypeError(f"no endpoint data available for {f!r}")


def _one_sided_pairs(f, i: int) -> tuple[ValuePair, ValuePair]:
    f = _function_part(f)
    if hasattr(f, "one_sided_values"):
        return f.one_sided_values[i - 1]
    raise TypeError(f"{f!r} carries no one-sided interface values")


def _initial_edges(f, g, lo: float, hi: float, i: int):
    """Panels aligned with the solution trace mesh where one is available."""
    for h in (f, g):
        h = _function_part(h)
        if hasattr(h, "piece"):
            nodes = np.asarray(h.piece(i).nodes, dtype=float)
            if len(nodes) > _INITIAL_EDGE_CAP:
                step = int(np.ceil(len(nodes) / _INITIAL_EDGE_CAP))
                nodes = np.concatenate([nodes[:-1:step], nodes[-1:]])
            if len(nodes) >= 3:
                return nodes
    return np.linspace(lo, hi, 9)


# -------------------------------------------------------------- quadrature

def _panel_sum(fn, edges):
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    xs = (mid[:, None] + half[:, None] * _GX[None, :]).ravel()
    vals = np.asarray(fn(xs)).reshape(len(mid), _GAUSS_ORDER)
    return complex((vals @ _GW) @ half)


def _refine(edges):
    mids = 0.5 * (edges[:-1] + edges[1:])
    out = np.empty(2 * len(edges) - 1)
    out[0::2] = edges
    out[1::2] = mids
    return out


def adaptive_panel_integral(fn, edges, quad_tol: float):
    """Composite fixed-order Gauss quadrature with panel doubling until two
    successive refinements agree to ``quad_tol``."""
    edges = np.asarray(edges, dtype=float)
    prev = _panel_sum(fn, edges)
    for _ in range(_MAX_DOUBLINGS):
        edges = _refine(edges)
        cur = _panel_sum(fn, edges)
        delta = abs(cur - prev)
        if delta <= quad_tol * max(1.0, abs(cur)):
            return cur, delta
        prev = cur
    raise QuadratureFailure(
        f"panel doubling did not converge (last delta {abs(cur - prev):.3e})")


# ---------------------------------------------------------- inner products

def inner_h1(problem: ValidatedProblem, f, g,
             quad_tol: float = DEFAULT_QUAD_TOL) -> InnerProductReport:
    """Weighted integral inner product; the second argument is conjugated."""
    fv = _piece_values(f)
    gv = _piece_values(g)
    total = 0.0 + 0.0j
    err = 0.0
    for i in range(1, problem.n + 2):
        lo, hi = problem.subinterval(i)
        edges = _initial_edges(f, g, lo, hi, i)

        def integrand(xs, i=i):
            return fv(i, xs) * np.conj(gv(i, xs))

        val, delta = adaptive_panel_integral(integrand, edges, quad_tol)
        total += problem.interval_weights[i - 1] * val
        err += problem.interval_weights[i - 1] * delta
    return InnerProductReport(h1_part=total, left_boundary_part=0.0,
                              right_boundary_part=0.0, total=total,
                              quadrature_error_estimate=err)


def inner_h(problem: ValidatedProblem, F, G,
            quad_tol: float = DEFAULT_QUAD_TOL) -> InnerProductReport:
    """Full inner product: integral part plus the two boundary terms."""
    base = inner_h1(problem, F, G, quad_tol)
    left = (problem.theta34_product()
            * _boundary_component(F, 1) * np.conj(_boundary_component(G, 1))
            / problem.kappa1)
    right = (problem.theta12_product()
             * _boundary_component(F, 2) * np.conj(_boundary_component(G, 2))
             / problem.kappa2)
    return InnerProductReport(
        h1_part=base.h1_part, left_boundary_part=left,
        right_boundary_part=right, total=base.h1_part + left + right,
        quadrature_error_estimate=base.quadrature_error_estimate)


def norm_h(problem: ValidatedProblem, F, quad_tol: float = DEFAULT_QUAD_TOL) -> float:
    val = inner_h(problem, F, F, quad_tol).total
    return float(np.sqrt(max(val.real, 0.0)))


def norm_h1(problem: ValidatedProblem, f, quad_tol: float = DEFAULT_QUAD_TOL) -> float:
    val = inner_h1(problem, f, f, quad_tol).total
    return float(np.sqrt(max(val.real, 0.0)))


# ------------------------------------------------------------- functionals

_FUNCTIONALS = ("Ba", "Ba'", "Bb", "Bb'")


def boundary_functional(problem: ValidatedProblem, f, which: str):
    """The four boundary functionals; ``which`` is one of Ba, Ba', Bb, Bb'."""
    if which not in _FUNCTIONALS:
        raise ValueError(f"which must be one of {_FUNCTIONALS}, got {which!r}")
    at_a, at_b = _endpoint_pairs(f)
    d, g = problem.delta, problem.gamma
    if which == "Ba":
        return d[0] * at_a.u - d[1] * at_a.du
    if which == "Ba'":
        return d[2] * at_a.u - d[3] * at_a.du
    if which == "Bb":
        return g[0] * at_b.u - g[1] * at_b.du
    return g[2] * at_b.u - g[3] * at_b.du


def _wronskian(vf: ValuePair, vg: ValuePair):
    return vf.u * np.conj(vg.du) - vf.du * np.conj(vg.u)


def boundary_identity_check(problem: ValidatedProblem, f, g) -> tuple[float, float]:
    """Residuals of the two boundary determinant identities.

    At the left end  Ba[f] conj(Ba'[g]) - Ba'[f] conj(Ba[g]) = kappa1 W(f, g~; a);
    at the right end Bb'[f] conj(Bb[g]) - Bb[f] conj(Bb'[g]) = -kappa2 W(f, g~; b).
    Residuals are normalized by max(1, |lhs|, |rhs|).
    """
    fa, fb = _endpoint_pairs(f)
    ga, gb = _endpoint_pairs(g)

    lhs_a = (boundary_functional(problem, f, "Ba") * np.conj(boundary_functional(problem, g, "Ba'"))
             - boundary_functional(problem, f, "Ba'") * np.conj(boundary_functional(problem, g, "Ba")))
    rhs_a = problem.kappa1 * _wronskian(fa, ga)
    res_a = abs(lhs_a - rhs_a) / max(1.0, abs(lhs_a), abs(rhs_a))

    lhs_b = (boundary_functional(problem, f, "Bb'") * np.conj(boundary_functional(problem, g, "Bb"))
             - boundary_functional(problem, f, "Bb") * np.conj(boundary_functional(problem, g, "Bb'")))
    rhs_b = -problem.kappa2 * _wronskian(fb, gb)
    res_b = abs(lhs_b - rhs_b) / max(1.0, abs(lhs_b), abs(rhs_b))
    return float(res_a), float(res_b)


def wronskian_transmission_identity(problem: ValidatedProblem, f, g, i: int) -> float:
    """Relative defect of theta_i34 W(f, g~; xi_i-) = theta_i12 W(f, g~; xi_i+)
    for two functions satisfying the interface conditions."""
    fm, fp = _one_sided_pairs(f, i)
    gm, gp = _one_sided_pairs(g, i)
    lhs = problem.theta(i, 3, 4) * _wronskian(fm, gm)
    rhs = problem.theta(i, 1, 2) * _wronskian(fp, gp)
    denom = max(abs(lhs), abs(rhs))
    if denom == 0.0:
        return 0.0
    return float(abs(lhs - rhs) / denom)


def check_orthogonality(problem: ValidatedProblem, psi_j, psi_k,
                        quad_tol: float = DEFAULT_QUAD_TOL) -> float:
    """|<Psi_j, Psi_k>| in the full inner product (1 on the diagonal for
    normalized eigenfunctions, ~0 off it)."""
    return float(abs(inner_h(problem, psi_j, psi_k, quad_tol).total))


# --------------------------------------------------------------- expansion

class CombinedPieces:
    """Linear combination of piecewise-evaluable functions; used for
    expansion residuals F - sum c_s Psi_s."""

    def __init__(self, terms, mesh_source=None):
        # terms: iterable of (coefficient, piecewise evaluable)
        self._terms = [(c, _piece_values(h)) for c, h in terms]
        self._mesh = _function_part(mesh_source) if mesh_source is not None else None

    def eval_piece(self, i, xs):
        xs = np.asarray(xs, dtype=float)
        acc = np.zeros(xs.shape, dtype=complex)
        for c, fn in self._terms:
            acc = acc + c * fn(i, xs)
        return np.stack([acc, np.zeros_like(acc)])

    def piece(self, i):
        if self._mesh is not None and hasattr(self._mesh, "piece"):
            return self._mesh.piece(i)
        raise AttributeError("no mesh source")


def as_augmented(F):
    """Wrap a plain function as a triple with zero boundary components."""
    if hasattr(F, "f1"):
        return F
    from .spectrum import AugmentedFunction
    return AugmentedFunction(f=F, f1=0.0, f2=0.0)


def expand(problem: ValidatedProblem, F, N: int, window: tuple[float, float],
           tol: float = 1e-10, quad_tol: float = DEFAULT_QUAD_TOL,
           grid: int | None = None, spectrum=None,
           ivp_tol: float | None = None) -> ExpansionResult:
    """Expansion of F in the first N normalized eigenfunctions.

    Coefficients are the full inner products c_s = <F, Psi_s>; the reported
    residual is the norm of F - sum_s c_s Psi_s in the full space.  A
    precomputed Spectrum can be passed to avoid re-searching the window.
    """
    from . import spectrum as _spectrum

    F = as_augmented(F)
    spec = spectrum if spectrum is not None else _spectrum.eigenvalues(
        problem, window, grid, tol)
    if len(spec.eigenvalues) < N:
        raise InsufficientEigenvalues(
            f"window {window} holds {len(spec.eigenvalues)} eigenvalues, need {N}")
    lams = spec.eigenvalues[:N]
    psis = [_spectrum.eigenfunction(problem, lam, tol, ivp_tol=ivp_tol)
            for lam in lams]
    coeffs = [complex(inner_h(problem, F, psi, quad_tol).total) for psi in psis]

    terms = [(1.0, F)] + [(-c, psi) for c, psi in zip(coeffs, psis)]
    diff_f = CombinedPieces(terms, mesh_source=psis[-1])
    from .spectrum import AugmentedFunction
    diff = AugmentedFunction(
        f=diff_f,
        f1=_boundary_component(F, 1) - sum(c * _boundary_component(p, 1)
                                           for c, p in zip(coeffs, psis)),
        f2=_boundary_component(F, 2) - sum(c * _boundary_component(p, 2)
                                           for c, p in zip(coeffs, psis)),
    )
    residual = norm_h(problem, diff, quad_tol)
    return ExpansionResult(coefficients=tuple(coeffs), truncation=N,
                           l2_residual=residual, eigenvalues=tuple(lams))
