"""Exception hierarchy shared by the package."""


class BoseCountError(Exception):
    """Base class for all errors raised by bosecount."""


class DomainError(BoseCountError, ValueError):
    """An argument lies outside the domain of the requested function."""


class PoleError(DomainError):
    """Evaluation requested exactly at a pole."""


class SpectrumError(BoseCountError, ValueError):
    """Invalid spectrum data or an operation unsupported for the model kind."""


class ParseError(SpectrumError):
    """Malformed custom spectrum or profile file."""


class ProfileUnavailable(SpectrumError):
    """No closed-form zeta profile exists for the model."""


class TruncationError(BoseCountError, ValueError):
    """A finite spectrum horizon is too short for the requested range."""


class SolverError(BoseCountError, ArithmeticError):
    """Saddle-point root finding failed or the root is not unique."""
