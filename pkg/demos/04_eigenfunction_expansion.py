"""Expanding a function in the weighted-orthonormal eigenfunctions.

The expansion converges in the norm of the extended space; the residual
after N terms decreases as more eigenfunctions enter.  Coefficients of the
smooth test function decay quickly, so a handful of terms already
reconstructs it well.
"""

import numpy as np

from bvtp import expand, p0
from bvtp.spectrum import eigenvalues

problem = p0()
f = lambda xs: np.asarray(xs, dtype=float) * (1.0 - np.asarray(xs, dtype=float))

window = (-5.0, 900.0)
spec = eigenvalues(problem, window)
print(f"{len(spec.eigenvalues)} eigenvalues in the window")

for N in (3, 6, 9, 12):
    result = expand(problem, f, N, window, spectrum=spec)
    print(f"N = {N:2d}: residual = {result.l2_residual:.6e}")

result = expand(problem, f, 8, window, spectrum=spec)
print("\nfirst coefficients of x(1-x):")
for lam, c in zip(result.eigenvalues, result.coefficients):
    print(f"  lambda = {lam:12.6f}   c = {complex(c).real: .8f}")
