"""Initial value integration of -rho_i^2 u'' + q(x) u = lambda u on a single
subinterval, in either direction, with dense output.

The integrator is an explicit adaptive Runge-Kutta scheme of order 8 with an
embedded error estimate (scipy's DOP853) and a degree-7 continuous
interpolant.  Complex spectral parameters are integrated in complex
arithmetic; real ones take the real fast path.  Traces are immutable and
evaluate the pair (u, u') at arbitrary points of their subinterval; stored
step nodes are reproduced exactly.
"""

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.integrate import solve_ivp

from .errors import DomainMismatch, NonFiniteState, StepSizeUnderflow
from .problem import ValidatedProblem

DEFAULT_TOL = 1e-10

# interpolant-derivative step for residual checks; the dense output is a
# piecewise polynomial, so a modest central-difference step is exact enough
_DERIV_H = 1e-6


@dataclass(frozen=True)
class ValuePair:
    """Function value and first derivative at one point."""

    u: complex
    du: complex

    def __post_init__(self):
        if not (np.isfinite(complex(self.u).real) and np.isfinite(complex(self.u).imag)
                and np.isfinite(complex(self.du).real) and np.isfinite(complex(self.du).imag)):
            raise NonFiniteState(f"non-finite value pair ({self.u}, {self.du})")

    def as_array(self, dtype):
        if dtype is float:
            return np.array([complex(self.u).real, complex(self.du).real])
        return np.array([self.u, self.du], dtype=dtype)


@dataclass(frozen=True)
class SolutionTrace:
    """Dense-output solution of one subinterval IVP.

    ``nodes`` are the accepted solver steps in ascending order and
    ``node_values`` the (u, u') pairs there; evaluation snaps to stored
    values when queried exactly at a node.
    """

    x_lo: float
    x_hi: float
    direction: str          # 'forward' or 'backward'
    lam: complex
    interval_index: int     # 1-based subinterval this trace lives on
    accuracy: float
    nodes: np.ndarray = field(repr=False)
    node_values: np.ndarray = field(repr=False)   # shape (2, len(nodes))
    _sol: object = field(repr=False)              # scipy OdeSolution
    _rho2: float = field(repr=False)
    _qcoeffs: tuple = field(repr=False)

    def _check_domain(self, x):
        slack = 1e-12 * (1.0 + abs(self.x_lo) + abs(self.x_hi))
        if np.any(x < self.x_lo - slack) or np.any(x > self.x_hi + slack):
            raise DomainMismatch(
                f"x = {x} outside trace interval [{self.x_lo:g}, {self.x_hi:g}]")

    def eval_many(self, xs):
        """Vectorized evaluation; returns an array of shape (2, len(xs))."""
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        self._check_domain(xs)
        vals = np.asarray(self._sol(np.clip(xs, self.x_lo, self.x_hi)))
        # snap exact node hits to the stored step values
        pos = np.searchsorted(self.nodes, xs)
        pos = np.clip(pos, 0, len(self.nodes) - 1)
        hit = self.nodes[pos] == xs
        if np.any(hit):
            vals[:, hit] = self.node_values[:, pos[hit]]
        return vals

    def eval(self, x: float) -> ValuePair:
        vals = self.eval_many([x])
        return ValuePair(vals[0, 0], vals[1, 0])

    def value_at_lo(self) -> ValuePair:
        return ValuePair(self.node_values[0, 0], self.node_values[1, 0])

    def value_at_hi(self) -> ValuePair:
        return ValuePair(self.node_values[0, -1], self.node_values[1, -1])

    def endpoint_value(self, which: str) -> ValuePair:
        return self.value_at_lo() if which == "lo" else self.value_at_hi()

    def ode_residual_at(self, xs):
        """|-rho^2 u'' + (q - lambda) u| with u'' taken from the interpolant
        (central difference of the u' component of the dense polynomial)."""
        xs = np.asarray(xs, dtype=float)
        h = _DERIV_H * max(1.0, self.x_hi - self.x_lo)
        inner = np.clip(xs, self.x_lo + h, self.x_hi - h)
        up = np.asarray(self._sol(inner + h))
        um = np.asarray(self._sol(inner - h))
        u = np.asarray(self._sol(inner))
        d2u = (up[1] - um[1]) / (2 * h)
        qv = npoly.polyval(inner, np.asarray(self._qcoeffs, dtype=float))
        return np.abs(-self._rho2 * d2u + (qv - self.lam) * u[0])

    def max_midpoint_residual(self) -> float:
        mids = 0.5 * (self.nodes[:-1] + self.nodes[1:])
        if len(mids) == 0:
            return 0.0
        return float(np.max(self.ode_residual_at(mids)))

    def magnitude(self) -> float:
        """Largest |u| at the stored nodes (scale for residual tolerances)."""
        return float(np.max(np.abs(self.node_values[0])))


def integrate_ivp(problem: ValidatedProblem, i: int, lam, start: str,
                  init: ValuePair, tol: float = DEFAULT_TOL) -> SolutionTrace:
    """Integrate the subinterval-i equation from one endpoint to the other.

    Parameters
    ----------
    i : int
        Subinterval index, 1-based.
    start : str
        'left' integrates forward from the left endpoint, 'right' backward
        from the right endpoint.
    init : ValuePair
        (u, u') at the starting endpoint.
    tol : float
        Local error tolerance per step.

    Raises
    ------
    StepSizeUnderflow
        Adaptive stepping stalled (stiffness or blow-up).
    NonFiniteState
        The state left the finite range.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if start not in ("left", "right"):
        raise ValueError("start must be 'left' or 'right'")
    x_lo, x_hi = problem.subinterval(i)
    rho2 = problem.rho2(i)
    qcoeffs = np.asarray(problem.q[i - 1], dtype=float)

    lam_c = complex(lam)
    is_complex = (lam_c.imag != 0.0
                  or complex(init.u).imag != 0.0
                  or complex(init.du).imag != 0.0)
    dtype = complex if is_complex else float
    lam_v = lam_c if is_complex else lam_c.real

    def rhs(x, y):
        return np.array([y[1], (npoly.polyval(x, qcoeffs) - lam_v) * y[0] / rho2],
                        dtype=dtype)

    if start == "left":
        span = (x_lo, x_hi)
        direction = "forward"
    else:
        span = (x_hi, x_lo)
        direction = "backward"

    y0 = init.as_array(dtype)
    scale = max(1.0, float(np.max(np.abs(y0))))
    # a modest safety factor keeps the accumulated global error within a
    # small multiple of the requested per-step tolerance
    rt = max(tol / 4.0, 4e-14)
    sol = solve_ivp(rhs, span, y0, method="DOP853", dense_output=True,
                    rtol=rt, atol=rt * scale, max_step=(x_hi - x_lo) / 8.0)
    if sol.status != 0:
        raise StepSizeUnderflow(sol.message, float(sol.t[-1]))
    if not (np.all(np.isfinite(sol.y.real)) and np.all(np.isfinite(sol.y.imag))):
        raise NonFiniteState(f"non-finite state while integrating subinterval {i}")

    ts = sol.t
    ys = sol.y
    if ts[0] > ts[-1]:
        ts = ts[::-1]
        ys = ys[:, ::-1]
    return SolutionTrace(
        x_lo=x_lo, x_hi=x_hi, direction=direction, lam=lam_v,
        interval_index=i, accuracy=tol, nodes=np.ascontiguousarray(ts),
        node_values=np.ascontiguousarray(ys), _sol=sol.sol,
        _rho2=rho2, _qcoeffs=tuple(qcoeffs),
    )


def wronskian_at(t1: SolutionTrace, t2: SolutionTrace, x: float):
    """u1(x) u2'(x) - u1'(x) u2(x) for two traces of the same problem piece."""
    if t1.interval_index != t2.interval_index:
        raise DomainMismatch("traces live on different subintervals")
    if t1.lam != t2.lam:
        raise DomainMismatch(f"traces have different lambda: {t1.lam} vs {t2.lam}")
    v1 = t1.eval(x)
    v2 = t2.eval(x)
    return v1.u * v2.du - v1.du * v2.u
