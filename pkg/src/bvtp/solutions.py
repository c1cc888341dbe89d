"""Global shooting solutions through the interfaces and the characteristic
function.

``build_phi`` integrates from the left boundary initial data and pushes the
solution across each interface with the jump map that keeps both matching
functionals exactly zero; ``build_chi`` mirrors this from the right.  The
Wronskian of the two solutions on subinterval i is omega_i; omega_1 is the
characteristic function whose zeros are the eigenvalues.  The cross-interface
recursion

    omega_{i+1} * theta_i12 = omega_i * theta_i34

holds identically for the exact solutions and is monitored on every build as
an integration-quality check.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConsistencyViolation
from .ivp import DEFAULT_TOL, SolutionTrace, ValuePair, integrate_ivp
from .problem import ValidatedProblem

# absolute floor factor for the recursion check: defects explained by honest
# integration error (~tol * Wronskian magnitude) must not trip the alarm
_RECURSION_REL = 1e-6
_RECURSION_FLOOR = 1e3


def transmit_forward(problem: ValidatedProblem, i: int, left: ValuePair) -> ValuePair:
    """Map (u, u') at xi_i- to the unique (u, u') at xi_i+ satisfying both
    matching functionals of interface i."""
    th = problem.theta
    t12 = th(i, 1, 2)
    u = (-th(i, 1, 4) * left.u - th(i, 1, 3) * left.du) / t12
    du = (th(i, 2, 4) * left.u + th(i, 2, 3) * left.du) / t12
    return ValuePair(u, du)


def transmit_backward(problem: ValidatedProblem, i: int, right: ValuePair) -> ValuePair:
    """Inverse of :func:`transmit_forward`: one-sided data at xi_i- from the
    data at xi_i+."""
    th = problem.theta
    t34 = th(i, 3, 4)
    u = (th(i, 2, 3) * right.u + th(i, 1, 3) * right.du) / t34
    du = (-th(i, 2, 4) * right.u - th(i, 1, 4) * right.du) / t34
    return ValuePair(u, du)


def phi_initial_data(problem: ValidatedProblem, lam) -> ValuePair:
    d = problem.delta
    return ValuePair(d[1] - lam * d[3], d[0] - lam * d[2])


def chi_initial_data(problem: ValidatedProblem, lam) -> ValuePair:
    g = problem.gamma
    return ValuePair(g[1] + lam * g[3], g[0] + lam * g[2])


@dataclass(frozen=True)
class PiecewiseSolution:
    """n+1 stitched traces representing phi(., lambda) or chi(., lambda).

    ``one_sided_values[i-1]`` holds the stored (minus, plus) value pairs at
    interface xi_i; the jump relations hold exactly as stored.
    """

    kind: str               # 'phi' | 'chi'
    lam: complex
    problem: ValidatedProblem
    pieces: tuple[SolutionTrace, ...]
    one_sided_values: tuple[tuple[ValuePair, ValuePair], ...]

    def piece(self, i: int) -> SolutionTrace:
        return self.pieces[i - 1]

    def eval_piece(self, i: int, xs):
        return self.piece(i).eval_many(xs)

    def eval(self, x: float) -> ValuePair:
        """Evaluate anywhere in [a, b]; exactly at an interface the stored
        minus-side value is returned."""
        p = self.problem
        for k, xi in enumerate(p.xi, start=1):
            if x == xi:
                return self.one_sided_values[k - 1][0]
        return self.piece(p.containing_interval(x)).eval(x)

    def eval_many(self, xs):
        """Vectorized evaluation across the whole domain; shape (2, len(xs))."""
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        p = self.problem
        idx = np.searchsorted(np.asarray(p.xi), xs, side="left") + 1
        idx = np.minimum(idx, p.n + 1)
        out = np.empty((2, xs.size), dtype=complex if np.iscomplexobj(self.pieces[0].node_values) else float)
        for i in range(1, p.n + 2):
            mask = idx == i
            if np.any(mask):
                out[:, mask] = self.piece(i).eval_many(xs[mask])
        return out

    def value_at_a(self) -> ValuePair:
        return self.pieces[0].value_at_lo()

    def value_at_b(self) -> ValuePair:
        return self.pieces[-1].value_at_hi()

    def transmission_residuals(self):
        """Per interface: (|first functional|, |second functional|, scale)
        evaluated on the stored one-sided values."""
        out = []
        for k, (minus, plus) in enumerate(self.one_sided_values, start=1):
            tm = self.problem.trans[k - 1]
            r1, r2 = tm.functionals(minus.u, minus.du, plus.u, plus.du)
            scale = max(abs(minus.u), abs(minus.du), abs(plus.u), abs(plus.du))
            out.append((abs(r1), abs(r2), scale))
        return out


def build_phi(problem: ValidatedProblem, lam, tol: float = DEFAULT_TOL) -> PiecewiseSolution:
    """Left-to-right shooting solution with the left boundary data built in."""
    pieces = []
    one_sided = []
    init = phi_initial_data(problem, lam)
    for i in range(1, problem.n + 2):
        trace = integrate_ivp(problem, i, lam, "left", init, tol)
        pieces.append(trace)
        if i <= problem.n:
            minus = trace.value_at_hi()
            plus = transmit_forward(problem, i, minus)
            one_sided.append((minus, plus))
            init = plus
    return PiecewiseSolution("phi", complex(lam), problem, tuple(pieces), tuple(one_sided))


def build_chi(problem: ValidatedProblem, lam, tol: float = DEFAULT_TOL) -> PiecewiseSolution:
    """Right-to-left shooting solution with the right boundary data built in."""
    pieces = [None] * (problem.n + 1)
    one_sided = [None] * problem.n
    init = chi_initial_data(problem, lam)
    for i in range(problem.n + 1, 0, -1):
        trace = integrate_ivp(problem, i, lam, "right", init, tol)
        pieces[i - 1] = trace
        if i >= 2:
            plus = trace.value_at_lo()
            minus = transmit_backward(problem, i - 1, plus)
            one_sided[i - 2] = (minus, plus)
            init = minus
    return PiecewiseSolution("chi", complex(lam), problem, tuple(pieces), tuple(one_sided))


def _hashable_lam(lam):
    lam_c = complex(lam)
    return lam_c if lam_c.imag != 0.0 else lam_c.real


@lru_cache(maxsize=512)
def _cached_pair(problem: ValidatedProblem, lam, tol: float):
    return build_phi(problem, lam, tol), build_chi(problem, lam, tol)


def solution_pair(problem: ValidatedProblem, lam, tol: float = DEFAULT_TOL):
    """(phi, chi) at one lambda; memoized since spectra, kernels and
    expansions all revisit the same parameter values."""
    return _cached_pair(problem, _hashable_lam(lam), float(tol))


@dataclass(frozen=True)
class CharacteristicValue:
    """omega_1 plus the per-interval Wronskians and the recursion defect."""

    lam: complex
    omega: complex
    omegas: tuple[complex, ...]
    max_recursion_violation: float
    phi: PiecewiseSolution
    chi: PiecewiseSolution


def _wronskian_scale(phi_v, chi_v):
    return abs(phi_v[0]) * abs(chi_v[1]) + abs(phi_v[1]) * abs(chi_v[0])


def omega_i(problem: ValidatedProblem, lam, i: int, tol: float = DEFAULT_TOL):
    """Wronskian of the two shooting solutions on subinterval i, evaluated at
    the subinterval midpoint."""
    phi, chi = solution_pair(problem, lam, tol)
    m = problem.midpoint(i)
    pv = phi.piece(i).eval(m)
    cv = chi.piece(i).eval(m)
    return pv.u * cv.du - pv.du * cv.u


def characteristic_detail(problem: ValidatedProblem, lam,
                          tol: float = DEFAULT_TOL) -> CharacteristicValue:
    phi, chi = solution_pair(problem, lam, tol)
    omegas = []
    scales = []
    for i in range(1, problem.n + 2):
        m = problem.midpoint(i)
        pv = phi.piece(i).eval_many([m])[:, 0]
        cv = chi.piece(i).eval_many([m])[:, 0]
        omegas.append(pv[0] * cv[1] - pv[1] * cv[0])
        scales.append(_wronskian_scale(pv, cv))

    max_viol = 0.0
    for i in range(1, problem.n + 1):
        t12 = problem.theta(i, 1, 2)
        t34 = problem.theta(i, 3, 4)
        defect = abs(omegas[i] * t12 - omegas[i - 1] * t34)
        mag = max(abs(omegas[i] * t12), abs(omegas[i - 1] * t34))
        floor = _RECURSION_FLOOR * tol * max(scales[i], scales[i - 1]) * max(t12, t34)
        rel = defect / mag if mag > 0 else 0.0
        max_viol = max(max_viol, rel)
        if defect > max(_RECURSION_REL * mag, floor):
            raise ConsistencyViolation(
                f"Wronskian recursion violated at interface {i}: defect "
                f"{defect:.3e} vs magnitude {mag:.3e} (lambda = {lam})")

    return CharacteristicValue(
        lam=complex(lam), omega=omegas[0], omegas=tuple(omegas),
        max_recursion_violation=max_viol, phi=phi, chi=chi,
    )


def characteristic(problem: ValidatedProblem, lam, tol: float = DEFAULT_TOL):
    """omega(lambda) = omega_1(lambda); raises ConsistencyViolation when the
    interface recursion check signals integrator breakdown."""
    return characteristic_detail(problem, lam, tol).omega


