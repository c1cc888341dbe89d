"""Eigenvalues and normalized eigenfunctions of the discontinuous fixture.

The returned eigenfunctions are triples (f, f1, f2): the function part plus
one scalar per end point, normalized in the weighted inner product of the
extended space.  Distinct eigenfunctions are orthogonal there even though
the function parts jump at the interface.
"""

import numpy as np

from bvtp import check_orthogonality, eigenfunction, eigenvalues, p2

problem = p2()

spec = eigenvalues(problem, (-5.0, 60.0))
print("eigenvalues found:")
for k, (lam, diag) in enumerate(zip(spec.eigenvalues, spec.diagnostics), start=1):
    print(f"  {k}: {lam:14.9f}   |omega| = {diag.abs_omega:.2e}   "
          f"iters = {diag.iterations}")

psis = [eigenfunction(problem, lam) for lam in spec.eigenvalues[:4]]
print("\nboundary components (f1, f2) of the first eigenfunction:",
      (psis[0].f1, psis[0].f2))

gram = np.array([[check_orthogonality(problem, pj, pk) for pk in psis]
                 for pj in psis])
print("\nGram matrix of the first four eigenfunctions:")
print(np.array_str(gram, precision=3, suppress_small=True))

# the jump at the interface: value doubles, slope halves
psi = psis[0]
minus, plus = psi.f.one_sided_values[0]
print("\nfirst eigenfunction at the interface:")
print(f"  value: {minus.u:.6f} -> {plus.u:.6f}  (ratio {plus.u / minus.u:g})")
print(f"  slope: {minus.du:.6f} -> {plus.du:.6f}  (ratio {plus.du / minus.du:g})")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 3.5))
    for k, psi in enumerate(psis[:3], start=1):
        for i in (1, 2):
            lo, hi = problem.subinterval(i)
            xs = np.linspace(lo, hi, 200)
            ys = psi.f.eval_piece(i, xs)[0].real
            ax.plot(xs, ys, color=f"C{k}",
                    label=f"k={k}" if i == 1 else None)
    ax.axvline(0.0, color="k", lw=0.6, ls="--")
    ax.legend()
    ax.set_xlabel("x")
    fig.tight_layout()
    fig.savefig("eigenfunctions.png", dpi=120)
    print("\nwrote eigenfunctions.png")
except ImportError:
    pass
