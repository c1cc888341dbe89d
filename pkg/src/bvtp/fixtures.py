"""Canonical test problems shipped with the package.

P0  classical problem on [0, 1] with no interface, unit coefficient,
    zero potential, and the spectral parameter in both boundary conditions.
P1  the same problem with a transparent continuity interface inserted at
    x = 1/2; its spectrum and solutions must reproduce P0's.
P2  genuinely discontinuous problem on [-1, 1]: coefficient jump (rho = 1
    then 2) and a non-trivial transmission matrix at x = 0 (value doubles,
    slope halves across the interface).
"""

from .problem import ProblemSpec, TransmissionMatrix, ValidatedProblem, validate_problem

_DELTA = (1.0, 0.0, 0.0, -1.0)
_GAMMA = (1.0, 0.0, 0.0, -1.0)

CONTINUITY_ROWS = ((1.0, 0.0, -1.0, 0.0), (0.0, 1.0, 0.0, -1.0))


def p0_spec() -> ProblemSpec:
    return ProblemSpec(a=0.0, b=1.0, xi=(), rho=(1.0,), q=((0.0,),),
                       delta=_DELTA, gamma=_GAMMA, trans=())


def p1_spec() -> ProblemSpec:
    tm = TransmissionMatrix(*CONTINUITY_ROWS)
    return ProblemSpec(a=0.0, b=1.0, xi=(0.5,), rho=(1.0, 1.0),
                       q=((0.0,), (0.0,)), delta=_DELTA, gamma=_GAMMA,
                       trans=(tm,))


def p2_spec() -> ProblemSpec:
    tm = TransmissionMatrix(row1=(1.0, 0.0, -0.5, 0.0),
                            row2=(0.0, 1.0, 0.0, -2.0))
    return ProblemSpec(a=-1.0, b=1.0, xi=(0.0,), rho=(1.0, 2.0),
                       q=((0.0,), (0.0,)), delta=_DELTA, gamma=_GAMMA,
                       trans=(tm,))


def p0() -> ValidatedProblem:
    return validate_problem(p0_spec())


def p1() -> ValidatedProblem:
    return validate_problem(p1_spec())


def p2() -> ValidatedProblem:
    return validate_problem(p2_spec())


ALL_FIXTURES = {"P0": p0, "P1": p1, "P2": p2}
