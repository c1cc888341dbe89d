"""Problem data model: domain partition, coefficients, boundary and
transmission conditions, and the derived quantities (column minors, kappa
determinants, interval weights) everything else is built on.

A problem is the second-order equation

    -rho_i^2 u'' + q(x) u = lambda u      on each subinterval Omega_i,

with spectral-parameter-dependent conditions at both end points and a pair
of linear matching conditions tying the one-sided values and slopes at each
interior interface point xi_i.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import (
    BadColumnPair,
    KappaNonPositive,
    NonIncreasingPartition,
    NonPositiveRho,
    ThetaDegenerate,
)

COLUMN_PAIRS = tuple(combinations((1, 2, 3, 4), 2))
_PAIR_INDEX = {pair: idx for idx, pair in enumerate(COLUMN_PAIRS)}


@dataclass(frozen=True)
class TransmissionMatrix:
    """2x4 coefficient matrix of one interface's matching conditions.

    Column order is (plus-slope, plus-value, minus-slope, minus-value):
    row1 holds the coefficients of the first matching functional, row2 of
    the second.  The functional evaluated on a function u at interface xi is

        row[2]*u'(xi-) + row[3]*u(xi-) + row[0]*u'(xi+) + row[1]*u(xi+).
    """

    row1: tuple[float, float, float, float]
    row2: tuple[float, float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "row1", tuple(float(v) for v in self.row1))
        object.__setattr__(self, "row2", tuple(float(v) for v in self.row2))
        if len(self.row1) != 4 or len(self.row2) != 4:
            raise ValueError("transmission matrix rows must have 4 entries")
        if not all(np.isfinite(self.row1 + self.row2)):
            raise ValueError("transmission matrix entries must be finite")

    def functionals(self, minus_u, minus_du, plus_u, plus_du):
        """Evaluate both matching functionals on one-sided data."""
        out = []
        for row in (self.row1, self.row2):
            out.append(row[2] * minus_du + row[3] * minus_u
                       + row[0] * plus_du + row[1] * plus_u)
        return tuple(out)


def theta_minor(tm: TransmissionMatrix, j: int, k: int) -> float:
    """Determinant of columns ``j`` and ``k`` (1-based, j < k) of ``tm``."""
    if not (1 <= j < k <= 4):
        raise BadColumnPair(f"need 1 <= j < k <= 4, got (j, k) = ({j}, {k})")
    a, b = tm.row1[j - 1], tm.row1[k - 1]
    c, d = tm.row2[j - 1], tm.row2[k - 1]
    return a * d - b * c


@dataclass(frozen=True)
class ProblemSpec:
    """Raw, unvalidated description of one boundary-value-transmission
    problem.

    Attributes
    ----------
    a, b : float
        End points of the full interval.
    xi : tuple of float
        Strictly increasing interior interface points (may be empty).
    rho : tuple of float
        One positive value per subinterval; the equation coefficient on
        subinterval i is ``rho[i-1]**2``.
    q : tuple of tuple of float
        One polynomial per subinterval, coefficients in ascending degree.
    delta, gamma : tuple of 4 floats
        Left and right boundary-condition coefficients.
    trans : tuple of TransmissionMatrix
        One matrix per interface point.
    """

    a: float
    b: float
    xi: tuple[float, ...]
    rho: tuple[float, ...]
    q: tuple[tuple[float, ...], ...]
    delta: tuple[float, float, float, float]
    gamma: tuple[float, float, float, float]
    trans: tuple[TransmissionMatrix, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "xi", tuple(float(v) for v in self.xi))
        object.__setattr__(self, "rho", tuple(float(v) for v in self.rho))
        object.__setattr__(self, "q", tuple(tuple(float(c) for c in qi) for qi in self.q))
        object.__setattr__(self, "delta", tuple(float(v) for v in self.delta))
        object.__setattr__(self, "gamma", tuple(float(v) for v in self.gamma))
        object.__setattr__(self, "trans", tuple(self.trans))

    @property
    def n(self) -> int:
        """Number of interior interfaces."""
        return len(self.xi)


@dataclass(frozen=True)
class ValidatedProblem:
    """A :class:`ProblemSpec` that passed validation, plus derived data.

    ``theta(i, j, k)`` returns the column minors of the i-th transmission
    matrix for i = 1..n, extended by ``theta(0, ., .) = theta(n+1, ., .) = 1``
    so products over interface ranges are always well formed.
    """

    a: float
    b: float
    xi: tuple[float, ...]
    rho: tuple[float, ...]
    q: tuple[tuple[float, ...], ...]
    delta: tuple[float, float, float, float]
    gamma: tuple[float, float, float, float]
    trans: tuple[TransmissionMatrix, ...]
    theta_table: tuple[tuple[float, ...], ...]  # rows i=0..n+1, cols COLUMN_PAIRS
    kappa1: float
    kappa2: float
    interval_weights: tuple[float, ...]  # V_1 .. V_{n+1}

    @property
    def n(self) -> int:
        return len(self.xi)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """(a, xi_1, ..., xi_n, b)."""
        return (self.a,) + self.xi + (self.b,)

    def subinterval(self, i: int) -> tuple[float, float]:
        """Closure of Omega_i for i = 1..n+1."""
        pts = self.breakpoints
        if not 1 <= i <= self.n + 1:
            raise IndexError(f"subinterval index {i} out of range 1..{self.n + 1}")
        return pts[i - 1], pts[i]

    def midpoint(self, i: int) -> float:
        lo, hi = self.subinterval(i)
        return 0.5 * (lo + hi)

    def containing_interval(self, x: float) -> int:
        """1-based index of the subinterval containing x (ties go left)."""
        if not self.a <= x <= self.b:
            raise ValueError(f"x = {x:g} outside [{self.a:g}, {self.b:g}]")
        idx = int(np.searchsorted(np.asarray(self.xi), x, side="left")) + 1
        return min(idx, self.n + 1)

    def rho2(self, i: int) -> float:
        return self.rho[i - 1] ** 2

    def q_eval(self, i: int, x):
        """Potential on subinterval i, vectorized over x."""
        return npoly.polyval(x, np.asarray(self.q[i - 1], dtype=float))

    def theta(self, i: int, j: int, k: int) -> float:
        if not (1 <= j < k <= 4):
            raise BadColumnPair(f"need 1 <= j < k <= 4, got (j, k) = ({j}, {k})")
        if not 0 <= i <= self.n + 1:
            raise IndexError(f"interface index {i} out of range 0..{self.n + 1}")
        return self.theta_table[i][_PAIR_INDEX[(j, k)]]

    def theta_map(self) -> dict[tuple[int, int, int], float]:
        """All minors as a plain dict keyed by (i, j, k), i = 1..n."""
        return {
            (i, j, k): self.theta(i, j, k)
            for i in range(1, self.n + 1)
            for (j, k) in COLUMN_PAIRS
        }

    def theta12_product(self) -> float:
        """Product of theta_i12 over interfaces i = 1..n (weight of the
        right boundary term in the full inner product)."""
        return float(np.prod([self.theta(i, 1, 2) for i in range(1, self.n + 1)])) if self.n else 1.0

    def theta34_product(self) -> float:
        """Product of theta_i34 over interfaces i = 1..n."""
        return float(np.prod([self.theta(i, 3, 4) for i in range(1, self.n + 1)])) if self.n else 1.0

    def spec(self) -> ProblemSpec:
        """The raw spec this problem was validated from."""
        return ProblemSpec(self.a, self.b, self.xi, self.rho, self.q,
                           self.delta, self.gamma, self.trans)


def validate_problem(spec: ProblemSpec) -> ValidatedProblem:
    """Check admissibility of ``spec`` and precompute derived quantities.

    Raises
    ------
    NonIncreasingPartition
        a < xi_1 < ... < xi_n < b violated.
    NonPositiveRho
        Some rho_i <= 0.
    ThetaDegenerate
        theta_i12 <= 0 or theta_i34 <= 0 at some interface.
    KappaNonPositive
        The boundary determinant at either end is not positive.
    """
    n = spec.n
    pts = (spec.a,) + spec.xi + (spec.b,)
    if not all(np.isfinite(pts)):
        raise NonIncreasingPartition("domain points must be finite")
    if any(pts[i] >= pts[i + 1] for i in range(len(pts) - 1)):
        raise NonIncreasingPartition(
            f"need a < xi_1 < ... < xi_n < b, got {pts}")

    if len(spec.rho) != n + 1:
        raise ValueError(f"expected {n + 1} rho values, got {len(spec.rho)}")
    if any(r <= 0 or not np.isfinite(r) for r in spec.rho):
        raise NonPositiveRho(f"rho values must be positive and finite: {spec.rho}")

    if len(spec.q) != n + 1:
        raise ValueError(f"expected {n + 1} potential descriptors, got {len(spec.q)}")
    for i, coeffs in enumerate(spec.q, start=1):
        if len(coeffs) == 0 or not all(np.isfinite(coeffs)):
            raise ValueError(f"potential on subinterval {i} must have finite coefficients")

    if len(spec.trans) != n:
        raise ValueError(f"expected {n} transmission matrices, got {len(spec.trans)}")

    d, g = spec.delta, spec.gamma
    kappa1 = d[2] * d[1] - d[3] * d[0]
    kappa2 = g[2] * g[1] - g[3] * g[0]
    if kappa1 <= 0:
        raise KappaNonPositive("left", kappa1)
    if kappa2 <= 0:
        raise KappaNonPositive("right", kappa2)

    ones = tuple(1.0 for _ in COLUMN_PAIRS)
    rows = [ones]
    for i, tm in enumerate(spec.trans, start=1):
        row = tuple(theta_minor(tm, j, k) for (j, k) in COLUMN_PAIRS)
        rows.append(row)
        if row[_PAIR_INDEX[(1, 2)]] <= 0:
            raise ThetaDegenerate(i, (1, 2), row[_PAIR_INDEX[(1, 2)]])
        if row[_PAIR_INDEX[(3, 4)]] <= 0:
            raise ThetaDegenerate(i, (3, 4), row[_PAIR_INDEX[(3, 4)]])
    rows.append(ones)
    theta_table = tuple(rows)

    def th(i, j, k):
        return theta_table[i][_PAIR_INDEX[(j, k)]]

    weights = []
    for s in range(1, n + 2):
        left = np.prod([th(i, 1, 2) for i in range(0, s)])
        right = np.prod([th(i, 3, 4) for i in range(s, n + 2)])
        weights.append(float(left * right) / spec.rho[s - 1] ** 2)
    if any(w <= 0 for w in weights):  # cannot happen once minors are positive
        raise ThetaDegenerate(0, (1, 2), min(weights))

    # Algebraic identity: V_s * rho_s^2 * prod_{j<s}(theta_j34/theta_j12)
    # must not depend on s.
    invariants = []
    for s in range(1, n + 2):
        ratio = np.prod([th(j, 3, 4) / th(j, 1, 2) for j in range(1, s)])
        invariants.append(weights[s - 1] * spec.rho[s - 1] ** 2 * ratio)
    ref = invariants[0]
    spread = max(abs(v - ref) for v in invariants) / abs(ref)
    if spread > 1e-12:
        raise AssertionError(
            f"interval-weight identity violated (relative spread {spread:.3e})")

    return ValidatedProblem(
        a=spec.a, b=spec.b, xi=spec.xi, rho=spec.rho, q=spec.q,
        delta=spec.delta, gamma=spec.gamma, trans=spec.trans,
        theta_table=theta_table, kappa1=float(kappa1), kappa2=float(kappa2),
        interval_weights=tuple(weights),
    )
