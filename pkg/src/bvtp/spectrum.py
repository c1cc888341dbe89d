"""Eigenvalue search on the real axis and normalized augmented
eigenfunctions.

Real eigenvalues are exactly the zeros of the characteristic function, which
is sampled over a window, bracketed by sign changes, and refined by a
bracketing-safe hybrid (Brent).  The default sampling grid is graded like
sqrt(lambda) because the roots of second-order problems spread
quadratically; a uniform grading is available.  Self-adjointness of the
underlying operator justifies restricting the search to the real axis.
"""

import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .errors import (
    CloseRootsWarning,
    MaxIterations,
    NoSignChange,
    NotAnEigenvalue,
)
from .ivp import DEFAULT_TOL, ValuePair
from .problem import ValidatedProblem
from .solutions import PiecewiseSolution, characteristic_detail

DEFAULT_ROOT_TOL = 1e-10
_PHASE_SAMPLES = 257


@dataclass(frozen=True)
class RootDiagnostic:
    bracket: tuple[float, float]
    abs_omega: float
    iterations: int


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: tuple[float, ...]
    diagnostics: tuple[RootDiagnostic, ...]
    search_window: tuple[float, float]
    grid_points: int


class ScaledSolution:
    """A piecewise shooting solution times a constant; keeps the evaluation
    protocol (pieces, one-sided interface values, endpoints) intact."""

    def __init__(self, base: PiecewiseSolution, factor):
        self.base = base
        self.factor = factor

    @property
    def problem(self):
        return self.base.problem

    @property
    def lam(self):
        return self.base.lam

    @property
    def one_sided_values(self):
        c = self.factor
        return tuple(
            (ValuePair(c * m.u, c * m.du), ValuePair(c * p.u, c * p.du))
            for (m, p) in self.base.one_sided_values)

    def piece(self, i):
        return self.base.piece(i)

    def eval_piece(self, i, xs):
        return self.factor * self.base.eval_piece(i, xs)

    def eval_many(self, xs):
        return self.factor * self.base.eval_many(xs)

    def eval(self, x):
        v = self.base.eval(x)
        return ValuePair(self.factor * v.u, self.factor * v.du)

    def value_at_a(self):
        v = self.base.value_at_a()
        return ValuePair(self.factor * v.u, self.factor * v.du)

    def value_at_b(self):
        v = self.base.value_at_b()
        return ValuePair(self.factor * v.u, self.factor * v.du)


@dataclass(frozen=True)
class AugmentedFunction:
    """Element of the direct-sum space: a piecewise function plus one scalar
    per end point.  Eigenfunctions carry f1 = Ba'[f] and f2 = -Bb'[f]."""

    f: object
    f1: complex
    f2: complex
    eigenvalue: float | None = None

    def eval_piece(self, i, xs):
        from .hilbert import _piece_values
        return np.stack([_piece_values(self.f)(i, np.asarray(xs, dtype=float)),
                         np.zeros(np.asarray(xs).shape, dtype=complex)])


# ----------------------------------------------------------------- search

def sample_characteristic(problem: ValidatedProblem, window: tuple[float, float],
                          count: int, tol: float = DEFAULT_TOL):
    """omega on a uniform real grid over the window; returns (lambda, omega)
    pairs with omega guaranteed real."""
    lo, hi = window
    if count < 2 or not lo < hi:
        raise ValueError("need count >= 2 and window lo < window hi")
    out = []
    for lam in np.linspace(lo, hi, count):
        w = characteristic_detail(problem, float(lam), tol).omega
        w = complex(w)
        if abs(w.imag) > 1e-10 * max(abs(w), 1e-300):
            raise AssertionError(
                f"omega({lam:g}) acquired an imaginary part: {w}")
        out.append((float(lam), w.real))
    return out


def _graded_lambdas(window, count):
    lo, hi = window
    t = np.linspace(np.sign(lo) * np.sqrt(abs(lo)), np.sign(hi) * np.sqrt(abs(hi)), count)
    lam = t * np.abs(t)
    lam[0], lam[-1] = lo, hi
    return lam


def _sample_graded(problem, window, count, tol):
    out = []
    for lam in _graded_lambdas(window, count):
        w = complex(characteristic_detail(problem, float(lam), tol).omega)
        out.append((float(lam), w.real))
    return out


def bracket_roots(samples):
    """Sign-change brackets from a sorted (lambda, omega) sequence; an exact
    zero at a node yields a degenerate bracket."""
    brackets = []
    for (l0, w0), (l1, w1) in zip(samples[:-1], samples[1:]):
        if w0 == 0.0:
            brackets.append((l0, l0))
        elif w0 * w1 < 0.0:
            brackets.append((l0, l1))
    if samples and samples[-1][1] == 0.0:
        brackets.append((samples[-1][0], samples[-1][0]))
    return brackets


def refine_root(problem: ValidatedProblem, bracket: tuple[float, float],
                tol: float = DEFAULT_ROOT_TOL, ivp_tol: float = DEFAULT_TOL):
    """Refine one bracket to a root of omega.

    Returns (lambda_k, RootDiagnostic).  Degenerate brackets (exact grid
    zeros) are accepted after one verification evaluation at lambda +- tol.
    """
    lo, hi = bracket

    def f(lam):
        return complex(characteristic_detail(problem, lam, ivp_tol).omega).real

    if lo == hi:
        w_lo, w_hi = f(lo - tol), f(lo + tol)
        if w_lo * w_hi > 0.0 and min(abs(w_lo), abs(w_hi)) > 0.0:
            raise NoSignChange(
                f"grid zero at lambda = {lo:g} not confirmed by neighbours")
        return lo, RootDiagnostic(bracket=(lo, hi), abs_omega=abs(f(lo)),
                                  iterations=1)

    w_lo, w_hi = f(lo), f(hi)
    if w_lo == 0.0:
        return lo, RootDiagnostic((lo, hi), 0.0, 1)
    if w_hi == 0.0:
        return hi, RootDiagnostic((lo, hi), 0.0, 1)
    if w_lo * w_hi > 0.0:
        raise NoSignChange(f"omega has equal signs at bracket {bracket}")
    try:
        root, info = brentq(f, lo, hi, xtol=tol, rtol=8 * np.finfo(float).eps,
                            maxiter=200, full_output=True)
    except RuntimeError as exc:
        raise MaxIterations(str(exc)) from exc
    if not info.converged:
        raise MaxIterations(f"refinement stalled on bracket {bracket}")
    return float(root), RootDiagnostic(bracket=(lo, hi),
                                       abs_omega=abs(f(float(root))),
                                       iterations=int(info.iterations))


def _default_grid(window):
    lo, hi = window
    t_lo = np.sign(lo) * np.sqrt(abs(lo))
    t_hi = np.sign(hi) * np.sqrt(abs(hi))
    return int(max(101, np.ceil(8 * (t_hi - t_lo))))


@lru_cache(maxsize=64)
def _eigenvalues_cached(problem, window, grid, tol, ivp_tol, grading):
    count = grid if grid is not None else _default_grid(window)
    if grading == "uniform":
        samples = sample_characteristic(problem, window, count, ivp_tol)
    else:
        samples = _sample_graded(problem, window, count, ivp_tol)
    roots = []
    diags = []
    for bracket in bracket_roots(samples):
        lam, diag = refine_root(problem, bracket, tol, ivp_tol)
        if roots and abs(lam - roots[-1]) < tol:
            continue
        roots.append(lam)
        diags.append(diag)
    for r0, r1 in zip(roots[:-1], roots[1:]):
        if r1 - r0 < 100 * tol:
            warnings.warn(
                f"roots {r0:.12g} and {r1:.12g} are within 100*tol; "
                "a close pair may have been merged or missed",
                CloseRootsWarning, stacklevel=3)
    return Spectrum(eigenvalues=tuple(roots), diagnostics=tuple(diags),
                    search_window=window, grid_points=count)


def eigenvalues(problem: ValidatedProblem, window: tuple[float, float],
                grid: int | None = None, tol: float = DEFAULT_ROOT_TOL,
                ivp_tol: float = DEFAULT_TOL, grading: str = "sqrt") -> Spectrum:
    """All real eigenvalues in the window: sample, bracket, refine.

    ``grid`` is the number of samples (a window-size heuristic when None);
    ``tol`` bounds the final bracket width; ``grading`` picks the sampling
    layout ('sqrt' follows the quadratic spreading of the roots, 'uniform'
    matches the plain sampler).
    """
    lo, hi = window
    if not lo < hi:
        raise ValueError("window must satisfy lo < hi")
    if grading not in ("sqrt", "uniform"):
        raise ValueError("grading must be 'sqrt' or 'uniform'")
    return _eigenvalues_cached(problem, (float(lo), float(hi)),
                               grid, float(tol), float(ivp_tol), grading)


# ----------------------------------------------------------- eigenfunction

def _l2_residual_scale(problem, lam, vb: ValuePair) -> float:
    g = problem.gamma
    return (abs(g[0] * vb.u) + abs(g[1] * vb.du)
            + abs(lam) * (abs(g[2] * vb.u) + abs(g[3] * vb.du)))


@lru_cache(maxsize=256)
def _eigenfunction_cached(problem, lam, tol, ivp_tol):
    from . import hilbert

    detail = characteristic_detail(problem, lam, ivp_tol)
    phi = detail.phi
    vb = phi.value_at_b()
    g = problem.gamma
    # omega(lam) = 0 forces phi to satisfy the right boundary condition too
    l2 = (g[0] * vb.u - g[1] * vb.du) + lam * (g[2] * vb.u - g[3] * vb.du)
    scale = max(_l2_residual_scale(problem, lam, vb), 1e-30)
    if abs(l2) > 1e-6 * scale:
        raise NotAnEigenvalue(
            f"lambda = {lam:.12g}: right boundary residual {abs(l2):.3e} "
            f"exceeds 1e-6 * {scale:.3e}")

    f1 = hilbert.boundary_functional(problem, phi, "Ba'")
    f2 = -hilbert.boundary_functional(problem, phi, "Bb'")
    raw = AugmentedFunction(f=phi, f1=f1, f2=f2, eigenvalue=float(lam))
    nrm = hilbert.norm_h(problem, raw, quad_tol=min(1e-9, 10 * tol))

    # deterministic phase: positive real value at the first maximizer of |f|
    best_val = None
    best_mag = -1.0
    for i in range(1, problem.n + 2):
        lo, hi = problem.subinterval(i)
        xs = np.linspace(lo, hi, _PHASE_SAMPLES)
        vals = phi.eval_piece(i, xs)[0]
        k = int(np.argmax(np.abs(vals)))
        if abs(vals[k]) > best_mag * (1.0 + 1e-12):
            best_mag = abs(vals[k])
            best_val = vals[k]
    phase = np.conj(best_val) / abs(best_val) if best_mag > 0 else 1.0
    factor = phase / nrm
    if abs(complex(factor).imag) < 1e-14 * abs(complex(factor).real):
        factor = complex(factor).real

    return AugmentedFunction(f=ScaledSolution(phi, factor),
                             f1=factor * f1, f2=factor * f2,
                             eigenvalue=float(lam))


def eigenfunction(problem: ValidatedProblem, lam_k: float,
                  tol: float = DEFAULT_ROOT_TOL,
                  ivp_tol: float | None = None) -> AugmentedFunction:
    """Normalized augmented eigenfunction at a refined eigenvalue.

    Raises NotAnEigenvalue when the right boundary residual of the shooting
    solution says lam_k was not refined well enough.  The default
    integration tolerance tightens with |lam_k| so the residual check stays
    meaningful for fast-oscillating eigenfunctions.
    """
    if ivp_tol is None:
        ivp_tol = min(DEFAULT_TOL, 1e-9 / (1.0 + abs(lam_k)))
    return _eigenfunction_cached(problem, float(lam_k), float(tol), float(ivp_tol))
