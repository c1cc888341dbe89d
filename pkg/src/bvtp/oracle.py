"""Independent finite-difference discretization of the full problem as a
matrix pencil (A, B), used to cross-validate the shooting spectrum and the
variation-of-parameters resolvent.

Interface points are represented by duplicated unknowns (one per side) tied
only through the two matching-condition rows, mirroring the one-sided-limit
formulation; continuity is never assumed.  The parameter-dependent boundary
conditions split into an A part (value/slope terms) and a B part (the
lambda-coefficient terms), so A v = lambda B v reproduces them exactly.
Everything is second order: central differences inside, one-sided
three-point stencils in the condition rows.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.linalg import eigvals
from scipy.sparse.linalg import spsolve

from .errors import SingularSystem, SpuriousModeWarning
from .problem import ValidatedProblem

ROW_INTERIOR = 0
ROW_BC = 1
ROW_TRANS = 2

_INFINITE_CUTOFF = 1e12
_IMAG_TOL = 1e-8
_DRIFT_SPURIOUS = 0.05


@dataclass(frozen=True)
class PencilPair:
    A: sparse.csr_matrix = field(repr=False)
    B: sparse.csr_matrix = field(repr=False)
    grid: tuple = field(repr=False)   # per-subinterval node arrays
    size: int
    row_kinds: np.ndarray = field(repr=False)

    def all_nodes(self) -> np.ndarray:
        return np.concatenate(self.grid)


def assemble_pencil(problem: ValidatedProblem, nodes_per_subinterval: int) -> PencilPair:
    """Build the generalized eigenvalue pencil at ``nodes_per_subinterval``
    mesh cells per subinterval (so each subinterval carries N+1 nodes)."""
    N = int(nodes_per_subinterval)
    if N < 8:
        raise ValueError("need at least 8 mesh cells per subinterval")
    n = problem.n
    pts = problem.breakpoints
    grids = []
    offsets = []
    off = 0
    for i in range(1, n + 2):
        grids.append(np.linspace(pts[i - 1], pts[i], N + 1))
        offsets.append(off)
        off += N + 1
    size = off

    A = sparse.lil_matrix((size, size))
    B = sparse.lil_matrix((size, size))
    kinds = np.full(size, ROW_INTERIOR, dtype=int)

    for i in range(1, n + 2):
        o = offsets[i - 1]
        h = (pts[i] - pts[i - 1]) / N
        rho2 = problem.rho2(i)
        xs = grids[i - 1]
        c = rho2 / (h * h)
        for j in range(1, N):
            g = o + j
            A[g, g - 1] = -c
            A[g, g] = 2 * c + problem.q_eval(i, xs[j])
            A[g, g + 1] = -c
            B[g, g] = 1.0

    # one-sided three-point first-derivative stencils, second order
    def forward(o, h):
        return ((o, -3.0 / (2 * h)), (o + 1, 4.0 / (2 * h)), (o + 2, -1.0 / (2 * h)))

    def backward(o_last, h):
        return ((o_last, 3.0 / (2 * h)), (o_last - 1, -4.0 / (2 * h)),
                (o_last - 2, 1.0 / (2 * h)))

    def add(mat, row, entries, scale):
        for col, v in entries:
            mat[row, col] += scale * v

    # left boundary row
    h1 = (pts[1] - pts[0]) / N
    d = problem.delta
    g0 = offsets[0]
    A[g0, g0] += d[0]
    add(A, g0, forward(g0, h1), -d[1])
    B[g0, g0] += d[2]
    add(B, g0, forward(g0, h1), -d[3])
    kinds[g0] = ROW_BC

    # right boundary row
    hn = (pts[-1] - pts[-2]) / N
    g = problem.gamma
    gL = offsets[-1] + N
    A[gL, gL] += g[0]
    add(A, gL, backward(gL, hn), -g[1])
    B[gL, gL] += -g[2]
    add(B, gL, backward(gL, hn), g[3])
    kinds[gL] = ROW_BC

    # transmission rows at the duplicated interface nodes
    for i in range(1, n + 1):
        o_m = offsets[i - 1]
        o_p = offsets[i]
        h_m = (pts[i] - pts[i - 1]) / N
        h_p = (pts[i + 1] - pts[i]) / N
        g_minus = o_m + N
        g_plus = o_p
        tm = problem.trans[i - 1]
        for row_idx, row in ((g_minus, tm.row1), (g_plus, tm.row2)):
            dp1, dp0, dm1, dm0 = row
            add(A, row_idx, backward(g_minus, h_m), dm1)
            A[row_idx, g_minus] += dm0
            add(A, row_idx, forward(g_plus, h_p), dp1)
            A[row_idx, g_plus] += dp0
            kinds[row_idx] = ROW_TRANS

    return PencilPair(A=A.tocsr(), B=B.tocsr(), grid=tuple(grids),
                      size=size, row_kinds=kinds)


def _pencil_eigenvalues(problem, N, count):
    pencil = assemble_pencil(problem, N)
    w = eigvals(pencil.A.toarray(), pencil.B.toarray(), check_finite=False)
    w = w[np.isfinite(w)]
    w = w[np.abs(w) < _INFINITE_CUTOFF]
    w = w[np.abs(w.imag) <= _IMAG_TOL * np.maximum(1.0, np.abs(w.real))]
    vals = np.sort(w.real)
    return vals[:count]


def _pair_nearest(coarse, fine):
    """Match each fine eigenvalue with its nearest coarse partner."""
    out = []
    for lam in fine:
        k = int(np.argmin(np.abs(coarse - lam)))
        out.append(coarse[k])
    return np.asarray(out)


@dataclass(frozen=True)
class OracleSpectrum:
    """Richardson-extrapolated pencil eigenvalues with per-root error
    estimates and the raw per-level values."""

    values: tuple[float, ...]
    error_estimates: tuple[float, ...]
    levels: tuple[int, ...]
    raw: tuple[tuple[float, ...], ...]

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)


def oracle_eigenvalues(problem: ValidatedProblem, nodes_per_subinterval: int,
                       count: int, levels: int = 2) -> OracleSpectrum:
    """The ``count`` smallest real pencil eigenvalues, extrapolated over
    meshes N, 2N, ... (``levels`` of them, default two).

    The error estimate per root is the Richardson correction for two levels
    and the difference of successive extrapolants for three or more.  Roots
    whose raw drift between meshes is large emit SpuriousModeWarning and are
    dropped.
    """
    N = int(nodes_per_subinterval)
    margin = 4
    levels = max(2, int(levels))
    raw = [_pencil_eigenvalues(problem, N * (2 ** j), count + margin)
           for j in range(levels)]

    fine = raw[-1]
    extraps = []
    for j in range(1, levels):
        coarse_paired = _pair_nearest(raw[j - 1], raw[j])
        extraps.append((4.0 * raw[j] - coarse_paired[: len(raw[j])]) / 3.0)

    final = extraps[-1]
    coarse_prev = _pair_nearest(raw[-2], fine)
    drift = np.abs(fine - coarse_prev)
    # drift/3 is the plain two-level correction and reliably conservative;
    # successive-extrapolant differences can cancel, so never go below it
    est = drift / 3.0
    if levels >= 3:
        prev_extrap = _pair_nearest(extraps[-2], fine)
        est = np.maximum(np.abs(final - prev_extrap), est / 4.0)
    est = np.maximum(est, 8 * np.finfo(float).eps * np.maximum(1.0, np.abs(final)))

    values, errors = [], []
    for k in range(min(count, len(final))):
        if drift[k] > _DRIFT_SPURIOUS * max(1.0, abs(fine[k])):
            warnings.warn(
                f"pencil eigenvalue near {fine[k]:.6g} drifts {drift[k]:.3g} "
                "between meshes; dropped as spurious",
                SpuriousModeWarning, stacklevel=2)
            continue
        values.append(float(final[k]))
        errors.append(float(est[k]))
    return OracleSpectrum(values=tuple(values[:count]),
                          error_estimates=tuple(errors[:count]),
                          levels=tuple(N * (2 ** j) for j in range(levels)),
                          raw=tuple(tuple(r) for r in raw))


@dataclass(frozen=True)
class OracleSolution:
    grid: tuple
    values: tuple          # per-subinterval arrays, one-sided at interfaces
    lam: float

    def all_nodes(self):
        return np.concatenate(self.grid)

    def all_values(self):
        return np.concatenate(self.values)


def oracle_solve(problem: ValidatedProblem, lam, f,
                 nodes_per_subinterval: int) -> OracleSolution:
    """Grid solution of (lambda B - A) v = r with r the sampling of f on
    interior rows and zero in the boundary/transmission rows."""
    from .hilbert import _piece_values

    pencil = assemble_pencil(problem, nodes_per_subinterval)
    fvals = _piece_values(f)
    rhs = np.zeros(pencil.size)
    interior = pencil.row_kinds == ROW_INTERIOR
    nodes = pencil.all_nodes()
    # interior rows are indexed by their own node
    off = 0
    for i, g in enumerate(pencil.grid, start=1):
        vals = np.asarray(fvals(i, g)).real.astype(float)
        sel = interior[off:off + len(g)]
        rhs[off:off + len(g)][sel] = vals[sel]
        off += len(g)

    M = (lam * pencil.B - pencil.A).tocsc()
    try:
        v = spsolve(M, rhs)
    except Exception as exc:  # umfpack/superlu raise on exact singularity
        raise SingularSystem(str(exc)) from exc
    if not np.all(np.isfinite(v)):
        raise SingularSystem(f"singular pencil system at lambda = {lam}")

    out = []
    off = 0
    for g in pencil.grid:
        out.append(np.asarray(v[off:off + len(g)]))
        off += len(g)
    return OracleSolution(grid=pencil.grid, values=tuple(out), lam=float(lam))
