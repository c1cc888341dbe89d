"""Green's kernel and the inhomogeneous solve.

For lambda off the spectrum the resolvent acts as an integral operator with
kernel G(x, y; lambda).  The kernel is not symmetric across the interface in
the raw sense; it is symmetric after weighting each argument with its
subinterval's inner-product weight V.  The solve itself is verified with an
independent finite-difference second derivative, and here also against the
matrix-pencil oracle.
"""

import numpy as np

from bvtp import greens, oracle_solve, p2, solve_resolvent

problem = p2()
lam = -2.0
V = problem.interval_weights

x, y = 0.5, -0.5
g_xy = greens(problem, lam, x, y)
g_yx = greens(problem, lam, y, x)
print(f"G({x}, {y}) = {g_xy:.10f}")
print(f"G({y}, {x}) = {g_yx:.10f}   (raw kernel is not symmetric)")
print(f"V2 G({x}, {y}) = {V[1] * g_xy:.10f}")
print(f"V1 G({y}, {x}) = {V[0] * g_yx:.10f}   (weighted kernel is)")

f = lambda xs: np.ones_like(np.asarray(xs, dtype=float))
sol = solve_resolvent(problem, lam, f)
print(f"\nresolvent solve at lambda = {lam}, f = 1:")
print(f"  ODE residual (finite-difference check): {sol.residual_ode:.3e}")
print(f"  boundary residual:                      {sol.residual_bc:.3e}")
print(f"  transmission residual:                  {sol.residual_trans:.3e}")

orc = oracle_solve(problem, lam, f, 800)
worst = 0.0
for i in (1, 2):
    u, _ = sol.u.eval_pair_piece(i, orc.grid[i - 1])
    worst = max(worst, float(np.max(np.abs(u.real - orc.values[i - 1]))))
print(f"  sup distance to the pencil oracle:      {worst:.3e}")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 2, figsize=(10, 3.5))
    xs = np.linspace(-0.999, 0.999, 240)
    xs = xs[np.abs(xs) > 1e-3]
    for y0 in (-0.6, 0.2, 0.7):
        gs = [greens(problem, lam, float(xx), y0) for xx in xs]
        axes[0].plot(xs, np.real(gs), label=f"y = {y0}")
    axes[0].set_title("kernel sections G(., y)")
    axes[0].legend()
    for i in (1, 2):
        lo, hi = problem.subinterval(i)
        grid = np.linspace(lo, hi, 200)
        u, _ = sol.u.eval_pair_piece(i, grid)
        axes[1].plot(grid, u.real, color="C0")
    axes[1].set_title("resolvent solution, f = 1")
    for ax in axes:
        ax.axvline(0.0, color="k", lw=0.6, ls="--")
        ax.set_xlabel("x")
    fig.tight_layout()
    fig.savefig("greens_and_resolvent.png", dpi=120)
    print("\nwrote greens_and_resolvent.png")
except ImportError:
    pass
