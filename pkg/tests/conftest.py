import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bvtp import fixtures
from bvtp.problem import ProblemSpec, TransmissionMatrix, validate_problem


@pytest.fixture(scope="session")
def P0():
    return fixtures.p0()


@pytest.fixture(scope="session")
def P1():
    return fixtures.p1()


@pytest.fixture(scope="session")
def P2():
    return fixtures.p2()


@pytest.fixture(scope="session")
def problems_dir():
    return Path(__file__).parent.parent / "problems"


def random_problem(rng, n=None):
    """Random admissible problem: increasing partition, positive rho,
    polynomial potentials, boundary pairs with positive kappa and interface
    matrices with positive 12- and 34-minors."""
    n = int(rng.integers(0, 4)) if n is None else n
    pts = np.sort(rng.uniform(-2.0, 2.0, n + 2))
    while np.min(np.diff(pts)) < 0.2:
        pts = np.sort(rng.uniform(-2.0, 2.0, n + 2))
    rho = rng.uniform(0.5, 2.0, n + 1)
    q = tuple(tuple(rng.uniform(-2.0, 2.0, int(rng.integers(1, 4))))
              for _ in range(n + 1))

    def boundary_pair():
        while True:
            c = rng.uniform(-2.0, 2.0, 4)
            if c[2] * c[1] - c[3] * c[0] > 0.1:
                return tuple(c)

    def interface_matrix():
        while True:
            r1 = rng.uniform(-2.0, 2.0, 4)
            r2 = rng.uniform(-2.0, 2.0, 4)
            t12 = r1[0] * r2[1] - r1[1] * r2[0]
            t34 = r1[2] * r2[3] - r1[3] * r2[2]
            if t12 > 0.1 and t34 > 0.1:
                return TransmissionMatrix(tuple(r1), tuple(r2))

    spec = ProblemSpec(a=pts[0], b=pts[-1], xi=tuple(pts[1:-1]),
                       rho=tuple(rho), q=q,
                       delta=boundary_pair(), gamma=boundary_pair(),
                       trans=tuple(interface_matrix() for _ in range(n)))
    return validate_problem(spec)
