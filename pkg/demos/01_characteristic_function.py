"""Define a discontinuous problem, validate it, and scan its characteristic
function.

The problem lives on [-1, 1] with an interface at 0 where the solution value
doubles and the slope halves.  Eigenvalues are exactly the zeros of the
characteristic function omega(lambda), the Wronskian of the two shooting
solutions built from the left and right boundary data.
"""

import numpy as np

from bvtp import p2, sample_characteristic
from bvtp.solutions import characteristic_detail

problem = p2()
print("domain:", problem.breakpoints)
print("kappa1 =", problem.kappa1, " kappa2 =", problem.kappa2)
print("interval weights V =", problem.interval_weights)
print("theta minors at the interface:",
      {f"{j}{k}": problem.theta(1, j, k) for (j, k) in
       ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))})

# scan omega over a window; sign changes bracket the eigenvalues
samples = sample_characteristic(problem, (-5.0, 40.0), 161)
signs = ""
for (l0, w0), (l1, w1) in zip(samples[:-1], samples[1:]):
    if w0 * w1 < 0:
        print(f"sign change in ({l0:8.3f}, {l1:8.3f})")

# the interface recursion omega_2 theta_12 = omega_1 theta_34 is monitored
# on every evaluation; look at its size for one lambda
detail = characteristic_detail(problem, 7.0)
print("\nomega_1(7) =", detail.omega)
print("omega_2(7) =", detail.omegas[1])
print("recursion violation:", detail.max_recursion_violation)

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    lams = np.array([l for l, _ in samples])
    vals = np.array([w for _, w in samples])
    fig, ax = plt.subplots(figsize=(7, 3.5))
    ax.plot(lams, vals)
    ax.axhline(0.0, color="k", lw=0.6)
    ax.set_xlabel("lambda")
    ax.set_ylabel("omega(lambda)")
    ax.set_ylim(-60, 60)
    fig.tight_layout()
    fig.savefig("characteristic_function.png", dpi=120)
    print("\nwrote characteristic_function.png")
except ImportError:
    pass
