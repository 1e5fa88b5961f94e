"""Coded exceptions raised by the sampler and mapped to CLI exit codes."""


class CurveSamplerError(Exception):
    code = "ERROR"
    exit_code = 1


class MalformedInputError(CurveSamplerError):
    code = "MALFORMED_INPUT"
    exit_code = 2


class EmptyDomainError(CurveSamplerError):
    code = "EMPTY_DOMAIN"
    exit_code = 2


class VanishingSpeedError(CurveSamplerError):
    """The speed vanishes on the interval, so C(gamma) is infinite."""

    code = "VANISHING_SPEED"
    exit_code = 3


class RootOnIntervalError(CurveSamplerError):
    code = "ROOT_ON_INTERVAL"
    exit_code = 3


class PositivityFailureError(CurveSamplerError):
    code = "POSITIVITY_FAILURE"
    exit_code = 4


class RootInsideError(CurveSamplerError):
    """A root of the squared speed sits on the ellipse used for M, so the speed nearly vanishes."""

    code = "ROOT_INSIDE"
    exit_code = 3


class ZeroPolynomialError(CurveSamplerError):
    code = "ZERO_POLY"


class NoConvergenceError(CurveSamplerError):
    code = "NO_CONVERGENCE"


class NonfiniteSampleError(CurveSamplerError):
    code = "NONFINITE_SAMPLE"
