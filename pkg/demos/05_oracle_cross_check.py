"""The independent finite-difference oracle.

Everything the shooting machinery computes is re-derivable from a matrix
pencil: central differences inside the subintervals, duplicated unknowns at
each interface tied by the matching-condition rows, and the
lambda-dependent boundary conditions split between the two matrices.  The
pencil converges at second order, so Richardson extrapolation over meshes
N and 2N gives both improved eigenvalues and per-root error estimates; the
shooting eigenvalues fall inside those estimates.
"""

import numpy as np

from bvtp import assemble_pencil, oracle_eigenvalues, p2
from bvtp.spectrum import eigenvalues

problem = p2()

pencil = assemble_pencil(problem, 12)
print("pencil size at 12 cells per subinterval:", pencil.size)
print("row kinds (0 interior, 1 boundary, 2 transmission):")
print(pencil.row_kinds)

osp = oracle_eigenvalues(problem, 200, 5, levels=3)
spec = eigenvalues(problem, (-5.0, 30.0), tol=1e-11, ivp_tol=1e-12)

print("\n  shooting            oracle              |diff|      estimate")
for sh, ov, est in zip(spec.eigenvalues, osp.values, osp.error_estimates):
    print(f"  {sh:16.10f}  {ov:16.10f}  {abs(sh - ov):.3e}  {est:.3e}")

raw_N, raw_2N, raw_4N = (np.asarray(r[:4]) for r in osp.raw)
ratios = np.abs(raw_N - raw_2N) / np.abs(raw_2N - raw_4N)
print("\nmesh-halving error ratios (4 = clean second order):",
      np.array_str(ratios, precision=2))
