"""Saddle point and leading-order asymptotics of the state count.

All estimates are carried as natural logarithms: Omega(10^4) for the
partition model is already ~e^245.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import specfun
from .errors import DomainError, SolverError
from .exact import CountTable, CumulativeTable
from .spectrum import ZetaProfile

__all__ = [
    "SaddleData",
    "AsymptoticResult",
    "saddle_polynomial",
    "solve_saddle",
    "f_polynomial",
    "main_asymptotic",
    "main_constants",
    "estimate",
    "surface_asymptotic_n2",
    "hardy_ramanujan",
    "meinardus_general",
    "upper_bound_log",
    "knopp_statistic",
    "weyl_average_statistic",
    "comparison_rows",
    "residual_exponent",
    "proof_constants",
]

FORMULAS = ("main1", "main2", "hardy_ramanujan", "meinardus", "upper_bound")


@dataclass(frozen=True)
class SaddleData:
    E: float
    x_E: float
    m_E: float
    eta: float
    f_at_xE: float
    exponent: float


@dataclass(frozen=True)
class AsymptoticResult:
    """Leading-order estimate of a count, stored as ``log``.

    For the main formulas ``estimate_log = log(C) + kappa*log(E) + exponent``.
    """

    E: float
    estimate_log: float
    C: float
    kappa: float
    exponent: float
    formula_id: str
    kappa1: float | None = None
    warnings: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.formula_id not in FORMULAS:
            raise ValueError(f"unknown formula id {self.formula_id!r}")
        if not math.isfinite(self.estimate_log):
            raise ArithmeticError("non-finite estimate")


def saddle_polynomial(profile: ZetaProfile, E: float) -> list[float]:
    """Ascending coefficients of E x^(n+1) - sum_j (n-j) K_j x^j."""
    if not E > 0:
        raise DomainError("E must be positive")
    n = profile.n
    coeffs = [-(n - j) * profile.K[j] for j in range(n)] + [0.0, float(E)]
    return coeffs


def _horner(coeffs: Sequence[float], x: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _deriv(coeffs: Sequence[float]) -> list[float]:
    return [k * c for k, c in enumerate(coeffs)][1:]


def f_polynomial(profile: ZetaProfile, x: float) -> float:
    """f(x) = sum_j (n-j+1) K_j x^j."""
    n = profile.n
    return _horner([(n - j + 1) * profile.K[j] for j in range(n)], x)


def _psi(profile: ZetaProfile, x: float) -> float:
    n = profile.n
    return math.fsum(profile.K[j] * x ** -(n - j) for j in range(n))


def solve_saddle(profile: ZetaProfile, E: float) -> SaddleData:
    """Unique positive zero x_E of the saddle polynomial, plus derived data.

    The zero is bracketed on a logarithmic grid below ten times the
    leading-order guess (n K_0 / E)^(1/(n+1)); more than one sign change
    there means E is below the uniqueness threshold and raises
    :class:`SolverError`, as does a non-positive slope at the zero.
    Refinement is Newton's method, falling back to bisection whenever a
    step leaves the bracket.
    """
    n = profile.n
    p = saddle_polynomial(profile, E)
    dp = _deriv(p)
    guess = (n * profile.K[0] / E) ** (1.0 / (n + 1))
    grid = guess * np.logspace(-8.0, 1.0, 901)
    vals = np.array([_horner(p, x) for x in grid])
    keep = vals != 0.0
    # a grid point may hit the root exactly; widen to its nonzero neighbours
    g, signs = grid[keep], np.sign(vals[keep])
    changes = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
    if len(changes) > 1:
        raise SolverError(f"non-unique root below threshold (E={E} too small)")
    if len(changes) == 0:
        raise SolverError(f"no positive root bracketed for E={E}")
    i = int(changes[0])
    lo, hi = float(g[i]), float(g[i + 1])
    x = 0.5 * (lo + hi)
    for _ in range(200):
        px = _horner(p, x)
        if px == 0.0:
            break
        if px < 0:
            lo = x
        else:
            hi = x
        d = _horner(dp, x)
        step = px / d if d > 0 else math.inf
        cand = x - step
        if not lo < cand < hi:
            cand = 0.5 * (lo + hi)
        if cand == x or abs(cand - x) <= 1e-16 * x:
            x = cand
            break
        x = cand
    # backward error: residual against the sum of absolute term sizes
    scale = math.fsum(abs(c) * x**i for i, c in enumerate(p))
    if abs(_horner(p, x)) > 1e-12 * scale:
        raise SolverError(f"saddle solver did not converge for E={E}")
    if not _horner(dp, x) > 0:
        raise SolverError(f"p_E'(x_E) <= 0 at E={E}")
    K = profile.K
    eta = math.fsum((n - j) * (n - j + 1) * K[j] * x ** -(n - j) for j in range(n))
    fx = f_polynomial(profile, x)
    return SaddleData(E=float(E), x_E=x, m_E=E * x, eta=eta, f_at_xE=fx, exponent=x**-n * fx)


def residual_exponent(profile: ZetaProfile, sd: SaddleData) -> float:
    """exponent - (E x_E + psi(x_E)); zero up to rounding at the saddle."""
    return sd.exponent - (sd.E * sd.x_E + _psi(profile, sd.x_E))


def main_constants(profile: ZetaProfile) -> tuple[float, float]:
    """``(C, kappa)`` of the general formula, C through the zeta determinant."""
    n, K0, Z0 = profile.n, profile.K[0], profile.Z0
    logC = (
        profile.Zprime0
        - 0.5 * math.log(2.0 * math.pi * (n + 1))
        + (1.0 - 2.0 * Z0) / (2.0 * (n + 1)) * math.log(n * K0)
    )
    return math.exp(logC), (Z0 - 1.0 - n / 2.0) / (n + 1)


def main_asymptotic(profile: ZetaProfile, E: float) -> AsymptoticResult:
    """C E^kappa exp(x_E^-n f(x_E)) with the zeta-determinant constant C."""
    C, kappa = main_constants(profile)
    sd = solve_saddle(profile, E)
    warn = () if sd.eta > 0 else ("eta_n(E) <= 0: E below the Gaussian-approximation threshold",)
    return AsymptoticResult(
        E=float(E),
        estimate_log=math.log(C) + kappa * math.log(E) + sd.exponent,
        C=C,
        kappa=kappa,
        exponent=sd.exponent,
        formula_id="main1",
        warnings=warn,
    )


def surface_y(profile: ZetaProfile, E: float) -> float:
    """y_E = (zeta(3) Vol(Sigma) / (2 pi^2 E))^(1/3)."""
    return (specfun.riemann_zeta(3).value * profile.volSigma / (2.0 * math.pi**2 * E)) ** (1.0 / 3.0)


def surface_asymptotic_n2(profile: ZetaProfile, E: float) -> AsymptoticResult:
    """The two-dimensional form with the explicit scale y_E."""
    if profile.n != 2:
        raise DomainError(f"surface formula needs n = 2, got n = {profile.n}")
    if not E > 0:
        raise DomainError("E must be positive")
    K0, K1, Z0 = profile.K[0], profile.K[1], profile.Z0
    y = surface_y(profile, E)
    base = specfun.riemann_zeta(3).value * profile.volSigma / (2.0 * math.pi**2)
    logC = profile.Zprime0 - 0.5 * math.log(6.0 * math.pi) + (1.0 - 2.0 * Z0) / 6.0 * math.log(base)
    kappa = (Z0 - 2.0) / 3.0
    exponent = 3.0 * K0 / y**2 + K1 / y - K1**2 / (12.0 * K0)
    return AsymptoticResult(
        E=float(E),
        estimate_log=logC + kappa * math.log(E) + exponent,
        C=math.exp(logC),
        kappa=kappa,
        exponent=exponent,
        formula_id="main2",
    )


def hardy_ramanujan(E: float) -> AsymptoticResult:
    """p(E) ~ exp(pi sqrt(2E/3)) / (4 E sqrt 3)."""
    if not E > 0:
        raise DomainError("E must be positive")
    exponent = math.pi * math.sqrt(2.0 * E / 3.0)
    C = 1.0 / (4.0 * math.sqrt(3.0))
    return AsymptoticResult(
        E=float(E),
        estimate_log=exponent - math.log(4.0 * math.sqrt(3.0)) - math.log(E),
        C=C,
        kappa=-1.0,
        exponent=exponent,
        formula_id="hardy_ramanujan",
    )


def meinardus_general(
    alpha: float,
    A: float,
    L0: float,
    L0prime: float,
    C0: float,
    delta: float,
    E: float,
) -> AsymptoticResult:
    """Meinardus' asymptotic for coefficients of prod (1 - e^(-l tau))^(-a_l).

    ``alpha`` and ``A`` are the single positive pole of the Dirichlet series
    L(s) = sum a_l l^-s and its residue; ``L0``/``L0prime`` its value and
    derivative at 0; ``C0`` and ``delta`` only enter the reported error
    exponent ``kappa1``.
    """
    if not alpha > 0 or not A > 0:
        raise DomainError("need alpha > 0 and A > 0")
    if not 0 < C0 < 1:
        raise DomainError("C0 must lie in (0, 1)")
    if not 0 < delta < 0.5:
        raise DomainError("delta must lie in (0, 1/2)")
    if not E > 0:
        raise DomainError("E must be positive")
    g = A * math.gamma(alpha + 1.0) * specfun.riemann_zeta(alpha + 1.0).value
    logC = L0prime - 0.5 * math.log(2.0 * math.pi * (alpha + 1.0))
    logC += (1.0 - 2.0 * L0) / (2.0 * (alpha + 1.0)) * math.log(g)
    kappa = (L0 - 1.0 - alpha / 2.0) / (1.0 + alpha)
    kappa1 = alpha / (alpha + 1.0) * min(C0 / alpha - delta / 4.0, 0.5 - delta)
    exponent = (alpha + 1.0) / alpha * E ** (alpha / (alpha + 1.0)) * g ** (1.0 / (alpha + 1.0))
    warn = () if kappa1 > 0 else ("kappa1 <= 0: error exponent degenerate",)
    return AsymptoticResult(
        E=float(E),
        estimate_log=logC + kappa * math.log(E) + exponent,
        C=math.exp(logC),
        kappa=kappa,
        exponent=exponent,
        formula_id="meinardus",
        kappa1=kappa1,
        warnings=warn,
    )


def proof_constants(n: int, mu: float | None = None) -> tuple[float, float, float]:
    """``(mu, delta, C0)`` of the error analysis for dimension ``n``.

    C0 is the decay exponent of the remainder J(x) = O(x^C0).  ``mu``
    defaults to 1/4 for n <= 2 and 1/(2n) otherwise; for n >= 3 ``delta`` is
    half of its admissible upper limit.
    """
    if n < 1:
        raise DomainError("n must be ≥ 1")
    if mu is None:
        mu = 0.25 if n <= 2 else 1.0 / (2 * n)
    if not 0 < mu < (0.5 if n == 1 else 1.0 / n):
        raise DomainError(f"mu={mu} out of range for n={n}")
    if n == 1:
        return mu, 0.5 - mu, 0.125 + 0.75 * mu
    if n == 2:
        return mu, 0.5 - mu, 0.25 + 1.5 * mu
    delta = 0.5 * min(0.5, 4.0 / n, 4.0 / 3.0 * (0.5 - 1.0 / n), 4.0 * (1.0 / n - mu))
    return mu, delta, n * (mu + delta / 4.0)


def upper_bound_log(profile: ZetaProfile, E: float) -> float:
    """log of the saddle upper bound without its unknown constant.

    Returns ``psi(x_E) + E x_E - Z(0) log x_E``; the true bound adds an
    unspecified ``log c`` so only differences and slopes are meaningful.
    """
    sd = solve_saddle(profile, E)
    return _psi(profile, sd.x_E) + E * sd.x_E - profile.Z0 * math.log(sd.x_E)


def knopp_statistic(table: CountTable, profile: ZetaProfile) -> list[tuple[int, float]]:
    """(E, E^(-n/(n+1)) log Omega(E)) for every E >= 1 with Omega(E) >= 1."""
    p = profile.n / (profile.n + 1)
    return [(E, math.log(w) / E**p) for E, w in enumerate(table.omega) if E >= 1 and w >= 1]


def weyl_average_statistic(cum: CumulativeTable, profile: ZetaProfile) -> list[tuple[int, float]]:
    """(E, E^(-n/(n+1)) log D(E)) for every E >= 1."""
    p = profile.n / (profile.n + 1)
    return [(E, math.log(d) / E**p) for E, d in enumerate(cum.d) if E >= 1]


def estimate(profile: ZetaProfile, E: float, formula: str) -> AsymptoticResult:
    """Dispatch on ``formula`` in ``main1``, ``main2``, ``hardy_ramanujan``."""
    if formula == "main1":
        return main_asymptotic(profile, E)
    if formula == "main2":
        return surface_asymptotic_n2(profile, E)
    if formula == "hardy_ramanujan":
        return hardy_ramanujan(E)
    raise ValueError(f"formula {formula!r} is not a point estimate")


def comparison_rows(
    table: CountTable, profile: ZetaProfile, energies: Iterable[int], formulas: Sequence[str]
) -> list[tuple[int, float, float, float, str]]:
    """Rows ``(E, ln_exact, ln_estimate, ratio, formula_id)`` with ratio = Omega(E)/estimate.

    Energies with Omega(E) = 0 are skipped.
    """
    rows = []
    for E in energies:
        w = table.omega[E]
        if w == 0:
            continue
        ln_exact = math.log(w)
        for formula in formulas:
            est = estimate(profile, E, formula)
            rows.append((E, ln_exact, est.estimate_log, math.exp(ln_exact - est.estimate_log), formula))
    return rows
