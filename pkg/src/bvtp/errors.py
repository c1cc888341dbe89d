"""Exception and warning types shared across the package."""


class BvtpError(Exception):
    """Base class for all library errors."""


# ---------------------------------------------------------------- validation

class ProblemDefinitionError(BvtpError):
    """A problem description is structurally or numerically inadmissible."""


class NonIncreasingPartition(ProblemDefinitionError):
    pass


class NonPositiveRho(ProblemDefinitionError):
    pass


class ThetaDegenerate(ProblemDefinitionError):
    """theta_i12 or theta_i34 is not strictly positive at interface ``i``."""

    def __init__(self, interface: int, pair: tuple[int, int], value: float):
        self.interface = interface
        self.pair = pair
        self.value = value
        super().__init__(
            f"theta_{interface}{pair[0]}{pair[1]} = {value:g} at interface "
            f"{interface} must be strictly positive"
        )


class KappaNonPositive(ProblemDefinitionError):
    """kappa_1 (end='left') or kappa_2 (end='right') is not positive."""

    def __init__(self, end: str, value: float):
        self.end = end
        self.value = value
        super().__init__(f"kappa at the {end} end is {value:g}, must be > 0")


class BadColumnPair(ProblemDefinitionError):
    pass


class ProblemFileError(BvtpError):
    """Parse failure in a problem-definition file; carries a line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


# ----------------------------------------------------------------- numerics

class IntegrationError(BvtpError):
    pass


class StepSizeUnderflow(IntegrationError):
    """The adaptive integrator stalled; ``x_reached`` is where it gave up."""

    def __init__(self, message: str, x_reached: float):
        self.x_reached = x_reached
        super().__init__(f"{message} (x reached: {x_reached:g})")


class NonFiniteState(IntegrationError):
    pass


class DomainMismatch(BvtpError):
    pass


class ConsistencyViolation(BvtpError):
    """The Wronskian recursion across interfaces failed its tolerance."""


class RootFindingError(BvtpError):
    pass


class NoSignChange(RootFindingError):
    pass


class MaxIterations(RootFindingError):
    pass


class NotAnEigenvalue(BvtpError):
    pass


class NearEigenvalue(BvtpError):
    pass


class InterfacePoint(BvtpError):
    pass


class QuadratureFailure(BvtpError):
    pass


class InsufficientEigenvalues(BvtpError):
    pass


class SingularSystem(BvtpError):
    pass


class SpuriousModeWarning(UserWarning):
    """An oracle eigenvalue failed the mesh-refinement stability filter."""


class CloseRootsWarning(UserWarning):
    """Two refined roots are suspiciously close; a pair may have been missed."""
