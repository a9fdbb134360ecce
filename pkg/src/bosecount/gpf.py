"""Grand partition function G(tau), heat trace theta(tau) and contour extraction.

For an integer spectrum G(tau) = prod_l (1 - e^(-lambda_l tau))^-1 is
2 pi i-periodic in tau, and Omega(E) is the E-th Fourier coefficient of
e^(E tau) G(tau) along any vertical line Re tau = x > 0.  The periodic
trapezoid rule on M >= E + 1 nodes recovers it exactly up to aliasing from
coefficients E + M, E + 2M, ... (damped by e^(-M x)).
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, TruncationError
from .spectrum import SpectrumModel, ZetaProfile, zeta_profile

__all__ = [
    "HalfPlanePoint",
    "LogDecomposition",
    "Extraction",
    "log_grand_partition",
    "heat_trace",
    "condition_h_margin",
    "meinardus_residual",
    "contour_extract",
    "aliasing_bound",
    "windowed_extract",
    "diagnostic_rows",
    "DEFAULT_TAIL_TOL",
]

DEFAULT_TAIL_TOL = 1e-17
MIN_QUAD_POINTS = 64


@dataclass(frozen=True)
class HalfPlanePoint:
    x: float
    y: float = 0.0

    def __post_init__(self):
        if not self.x > 0:
            raise DomainError(f"need Re tau > 0, got x={self.x}")

    @property
    def tau(self) -> complex:
        return complex(self.x, self.y)


@dataclass(frozen=True)
class LogDecomposition:
    """log G = principal_part + log_term + const_term + residual_J."""

    logG: complex
    principal_part: complex
    log_term: complex
    const_term: float
    residual_J: complex


@dataclass(frozen=True)
class Extraction:
    value: float
    imag: float
    quad_points: int

    @property
    def imag_ratio(self) -> float:
        return abs(self.imag) / abs(self.value) if self.value else math.inf


def _point(tau) -> HalfPlanePoint:
    if isinstance(tau, HalfPlanePoint):
        return tau
    tau = complex(tau)
    return HalfPlanePoint(tau.real, tau.imag)


@lru_cache(maxsize=64)
def _spectrum_arrays(model: SpectrumModel, lam_max: int) -> tuple[np.ndarray, np.ndarray]:
    pairs = list(itertools.takewhile(lambda p: p[0] <= lam_max, model.iter_eigenvalues()))
    lam = np.array([p[0] for p in pairs], dtype=float)
    mult = np.array([p[1] for p in pairs], dtype=float)
    return lam, mult


def _cutoff(model: SpectrumModel, x: float, tail_tol: float) -> int:
    """Largest eigenvalue needed so that later terms stay below tail_tol.

    Terms mult(lambda) e^(-lambda x) / (1 - e^(-x)) are checked past the
    maximum of the polynomially growing multiplicity against the exponential.
    """
    denom = -math.expm1(-x)
    if model.is_finite:
        if not model.pairs:
            return 0
        last = model.pairs[-1][0]
        if model.horizon is not None:
            h = model.horizon
            bound = model.multiplicity(last) * math.exp(-(h + 1) * x) / denom
            if bound >= tail_tol:
                raise TruncationError(
                    f"spectrum truncated at horizon {h}: tail term {bound:.3g} ≥ tail_tol"
                )
        return last
    lam = max(int(math.ceil((model.n - 1) / x)) + 1, 1)
    while model.multiplicity(lam) * math.exp(-lam * x) / denom >= tail_tol:
        lam = int(lam * 1.25) + 1
    return lam


def _log1m(z: np.ndarray) -> np.ndarray:
    # principal log(1 - z) for |z| < 1, accurate when |z| is small
    zr, zi = z.real, z.imag
    re = 0.5 * np.log1p(-2.0 * zr + zr * zr + zi * zi)
    im = np.arctan2(-zi, 1.0 - zr)
    return re + 1j * im


def _fsum_complex(values: np.ndarray) -> complex:
    return complex(math.fsum(values.real), math.fsum(values.imag))


def log_grand_partition(model: SpectrumModel, tau, tail_tol: float = DEFAULT_TAIL_TOL) -> complex:
    """log G(tau) = -sum_l log(1 - e^(-lambda_l tau)), principal branch per factor.

    The series stops once the terms fall under ``tail_tol``; the neglected
    tail is then at most about ``tail_tol * (1 + 1/x)``.
    """
    pt = _point(tau)
    lam, mult = _spectrum_arrays(model, _cutoff(model, pt.x, tail_tol))
    if pt.y == 0.0:
        return complex(math.fsum(-mult * np.log1p(-np.exp(-lam * pt.x))), 0.0)
    z = np.exp(-lam * pt.tau)
    return _fsum_complex(-mult * _log1m(z))


def heat_trace(model: SpectrumModel, tau, tail_tol: float = DEFAULT_TAIL_TOL) -> complex:
    """theta(tau) = sum_l e^(-lambda_l tau)."""
    pt = _point(tau)
    lam, mult = _spectrum_arrays(model, _cutoff(model, pt.x, tail_tol))
    if pt.y == 0.0:
        return complex(math.fsum(mult * np.exp(-lam * pt.x)), 0.0)
    return _fsum_complex(mult * np.exp(-lam * pt.tau))


def condition_h_margin(model: SpectrumModel, x: float, y: float, tail_tol: float = DEFAULT_TAIL_TOL) -> float:
    """Re theta(x + iy) - theta(x) for x <= |y| <= pi."""
    if not x > 0:
        raise DomainError("x must be positive")
    if not (x * (1 - 1e-12) <= abs(y) <= math.pi * (1 + 1e-12)):
        raise DomainError(f"need x ≤ |y| ≤ π, got x={x}, y={y}")
    return heat_trace(model, complex(x, y), tail_tol).real - heat_trace(model, x, tail_tol).real


def meinardus_residual(
    model: SpectrumModel,
    tau,
    tail_tol: float = DEFAULT_TAIL_TOL,
    profile: ZetaProfile | None = None,
) -> LogDecomposition:
    """Split log G(tau) into its singular part and the remainder J(tau).

    Valid in the sector |Im tau| <= Re tau, where log tau is the principal
    branch.  ``profile`` defaults to the model's closed-form profile.
    """
    pt = _point(tau)
    if abs(pt.y) > pt.x:
        raise DomainError(f"|y| > x outside the sector: x={pt.x}, y={pt.y}")
    if profile is None:
        profile = zeta_profile(model)
    t = pt.tau
    n = profile.n
    logG = log_grand_partition(model, pt, tail_tol)
    principal = sum(profile.K[j] * t ** -(n - j) for j in range(n))
    log_term = -profile.Z0 * cmath.log(t)
    J = logG - principal - log_term - profile.Zprime0
    return LogDecomposition(logG, complex(principal), log_term, profile.Zprime0, J)


def _truncated_levels(model: SpectrumModel, E: int) -> tuple[np.ndarray, np.ndarray]:
    if model.valid_up_to < E:
        raise TruncationError(f"spectrum truncated below E={E}")
    return _spectrum_arrays(model, E)


def _log_truncated(lam, mult, x: float) -> float:
    return float(-np.sum(mult * np.log1p(-np.exp(-lam * x)))) if len(lam) else 0.0


def aliasing_bound(model: SpectrumModel, E: int, x: float, quad_points: int) -> float:
    """Upper bound on the trapezoid aliasing error sum_{j>=1} Omega(E + jM) e^(-jMx).

    Uses Omega(E') e^(-E' x/2) <= G(x/2) for the truncated product.
    """
    lam, mult = _truncated_levels(model, E)
    h = 0.5 * x
    log_b = _log_truncated(lam, mult, h) + E * h - quad_points * h
    return math.exp(log_b) / -math.expm1(-quad_points * h)


def _trapezoid(lam, mult, E: int, x: float, M: int) -> tuple[float, float]:
    y = -math.pi + 2.0 * math.pi * np.arange(M) / M
    tau = x + 1j * y
    shift = E * x + _log_truncated(lam, mult, x)
    if len(lam):
        logG = -(_log1m(np.exp(-np.outer(tau, lam))) @ mult)
    else:
        logG = np.zeros(M, dtype=complex)
    mean = np.exp(E * tau + logG - shift).sum() / M
    scale = math.exp(shift)
    return mean.real * scale, mean.imag * scale


def contour_extract(model: SpectrumModel, E: int, x: float, quad_points: int | None = None) -> Extraction:
    """Omega(E) from the periodic trapezoid rule on Re tau = x.

    Uses the product truncated at lambda <= E, which has the same
    coefficients up to q^E.  An explicit ``quad_points`` must be at least
    ``max(64, E + 1)``.  By default the node count starts at
    ``max(64, 4 (E + 1))`` and grows until :func:`aliasing_bound` is below
    1e-12 of the result.
    """
    if E < 0:
        raise DomainError("E must be non-negative")
    if not x > 0:
        raise DomainError("x must be positive")
    lam, mult = _truncated_levels(model, E)
    if quad_points is not None:
        M = int(quad_points)
        if M < E + 1:
            raise DomainError(f"aliasing: quad_points={M} < E+1={E + 1}")
        if M < MIN_QUAD_POINTS:
            raise DomainError(f"quad_points must be ≥ {MIN_QUAD_POINTS}")
        re, im = _trapezoid(lam, mult, E, x, M)
        return Extraction(re, im, M)
    M = max(MIN_QUAD_POINTS, 4 * (E + 1))
    re, im = _trapezoid(lam, mult, E, x, M)
    while aliasing_bound(model, E, x, M) > 1e-12 * max(1.0, abs(re)):
        M = int(M * 1.5)
        re, im = _trapezoid(lam, mult, E, x, M)
    return Extraction(re, im, M)


def windowed_extract(
    model: SpectrumModel,
    E: int,
    x: float,
    T: float,
    nodes: int | None = None,
    tail_tol: float = DEFAULT_TAIL_TOL,
) -> tuple[float, float]:
    """Finite-window average (1/2T) int_{-T}^{T} e^(E tau) G(tau) dy and its error bound.

    Returns ``(estimate, bound)`` with ``bound = G(x) e^(E x) / T`` (the
    minimal gap between distinct energies is 1 for integer spectra).
    Gauss-Legendre quadrature on ``nodes`` points.
    """
    if not 0 < T <= math.pi:
        raise DomainError(f"T must lie in (0, π], got {T}")
    if not x > 0:
        raise DomainError("x must be positive")
    if nodes is None:
        nodes = 8 * (E + 10) + 64
    t, w = np.polynomial.legendre.leggauss(nodes)
    y = T * t
    logG0 = log_grand_partition(model, x, tail_tol).real
    shift = E * x + logG0
    vals = np.array(
        [cmath.exp(E * complex(x, yy) + log_grand_partition(model, complex(x, yy), tail_tol) - shift) for yy in y]
    )
    integral = T * np.dot(w, vals)
    estimate = (integral / (2.0 * T)).real * math.exp(shift)
    bound = math.exp(shift) / T
    return float(estimate), bound


def diagnostic_rows(model: SpectrumModel, points, profile: ZetaProfile | None = None, tail_tol: float = DEFAULT_TAIL_TOL):
    """Rows ``(x, y, re_logG, im_logG, re_J, im_J, margin)`` for a sweep.

    J is only defined for |y| <= x and the margin only for x <= |y| <= pi;
    undefined entries are None.
    """
    rows = []
    for x, y in points:
        logG = log_grand_partition(model, complex(x, y), tail_tol)
        J = None
        if abs(y) <= x:
            J = meinardus_residual(model, complex(x, y), tail_tol, profile).residual_J
        margin = None
        if x * (1 - 1e-12) <= abs(y) <= math.pi * (1 + 1e-12):
            margin = condition_h_margin(model, x, y, tail_tol)
        rows.append(
            (
                x,
                y,
                logG.real,
                logG.imag,
                None if J is None else J.real,
                None if J is None else J.imag,
                margin,
            )
        )
    return rows
