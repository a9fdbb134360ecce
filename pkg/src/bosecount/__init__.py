"""Exact state counts of a free Boson gas on integer spectra and their asymptotics."""
from .errors import (
    BoseCountError,
    DomainError,
    ParseError,
    PoleError,
    ProfileUnavailable,
    SolverError,
    SpectrumError,
    TruncationError,
)
from .exact import count_joint, count_states, cumulative, fugacity_weighted
from .spectrum import SpectrumModel, ZetaProfile, load_profile, parse_model, zeta_profile

__version__ = "0.1.0"

__all__ = [
    "BoseCountError",
    "DomainError",
    "ParseError",
    "PoleError",
    "ProfileUnavailable",
    "SolverError",
    "SpectrumError",
    "TruncationError",
    "SpectrumModel",
    "ZetaProfile",
    "count_states",
    "count_joint",
    "cumulative",
    "fugacity_weighted",
    "load_profile",
    "parse_model",
    "zeta_profile",
    "__version__",
]
