"""Discontinuous Sturm-Liouville boundary-value-transmission problems.

Spectra, weighted-orthonormal eigenfunctions, Green's functions, resolvent
solves and eigenfunction expansions for second-order problems with
eigenparameter-dependent boundary conditions and interior interface
(transmission) conditions, cross-validated against an independent
finite-difference matrix-pencil oracle.
"""

__version__ = "0.1.0"

from .errors import BvtpError
from .fixtures import p0, p1, p2
from .hilbert import (
    EndpointData,
    ExpansionResult,
    InnerProductReport,
    boundary_functional,
    boundary_identity_check,
    check_orthogonality,
    expand,
    inner_h,
    inner_h1,
    wronskian_transmission_identity,
)
from .ivp import SolutionTrace, ValuePair, integrate_ivp, wronskian_at
from .oracle import (
    OracleSolution,
    OracleSpectrum,
    PencilPair,
    assemble_pencil,
    oracle_eigenvalues,
    oracle_solve,
)
from .problem import (
    ProblemSpec,
    TransmissionMatrix,
    ValidatedProblem,
    theta_minor,
    validate_problem,
)
from .problemfile import read_problem_file, write_problem_file
from .resolvent import (
    GreensEvaluation,
    ResolventSolution,
    greens,
    resolvent_selfadjointness_check,
    solve_resolvent,
)
from .solutions import (
    PiecewiseSolution,
    build_chi,
    build_phi,
    characteristic,
    characteristic_detail,
    omega_i,
    transmit_backward,
    transmit_forward,
)
from .spectrum import (
    AugmentedFunction,
    Spectrum,
    bracket_roots,
    eigenfunction,
    eigenvalues,
    refine_root,
    sample_characteristic,
)

__all__ = [
    "AugmentedFunction",
    "BvtpError",
    "EndpointData",
    "ExpansionResult",
    "GreensEvaluation",
    "InnerProductReport",
    "OracleSolution",
    "OracleSpectrum",
    "PencilPair",
    "PiecewiseSolution",
    "ProblemSpec",
    "ResolventSolution",
    "SolutionTrace",
    "Spectrum",
    "TransmissionMatrix",
    "ValidatedProblem",
    "ValuePair",
    "assemble_pencil",
    "boundary_functional",
    "boundary_identity_check",
    "bracket_roots",
    "build_chi",
    "build_phi",
    "characteristic",
    "characteristic_detail",
    "check_orthogonality",
    "eigenfunction",
    "eigenvalues",
    "expand",
    "greens",
    "inner_h",
    "inner_h1",
    "integrate_ivp",
    "omega_i",
    "oracle_eigenvalues",
    "oracle_solve",
    "p0",
    "p1",
    "p2",
    "read_problem_file",
    "refine_root",
    "resolvent_selfadjointness_check",
    "sample_characteristic",
    "solve_resolvent",
    "theta_minor",
    "transmit_backward",
    "transmit_forward",
    "validate_problem",
    "wronskian_at",
    "wronskian_transmission_identity",
    "write_problem_file",
]
