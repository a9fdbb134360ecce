"""Riemann/Hurwitz zeta values and s-derivatives, log-gamma, digamma.

Everything here works in double precision.  Positive-side evaluations use
Euler-Maclaurin summation with a fixed number of direct terms and a fixed
number of Bernoulli corrections; the negative real axis is reached through
the functional equation (Riemann) or Bernoulli polynomials (Hurwitz at
non-positive integers), because direct summation there cancels
catastrophically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError, PoleError

__all__ = [
    "SpecialValue",
    "riemann_zeta",
    "riemann_zeta_deriv",
    "zeta_deriv",
    "hurwitz_zeta",
    "hurwitz_zeta_deriv",
    "hurwitz_zeta_deriv0",
    "log_gamma",
    "digamma",
    "bernoulli",
    "bernoulli_poly",
    "GLAISHER",
    "LOG_2PI",
]

_EPS = 2.0**-52

#: Direct-summation terms in the Euler-Maclaurin formula.
EM_TERMS = 30
#: Number of Bernoulli correction terms.
EM_ORDER = 20

GLAISHER = 1.2824271291006226368753425688697917277676889273250
LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class SpecialValue:
    """A real function value together with an absolute error bound."""

    value: float
    abs_error_bound: float

    def __post_init__(self):
        if math.isnan(self.value) or math.isinf(self.value):
            raise DomainError(f"non-finite special value {self.value!r}")
        if not (self.abs_error_bound >= 0.0) or math.isinf(self.abs_error_bound):
            raise DomainError(f"invalid error bound {self.abs_error_bound!r}")

    def __float__(self):
        return self.value


@lru_cache(maxsize=None)
def bernoulli(m: int) -> Fraction:
    """Bernoulli number B_m with the convention B_1 = -1/2."""
    if m < 0:
        raise DomainError("m must be non-negative")
    if m == 0:
        return Fraction(1)
    if m > 1 and m % 2 == 1:
        return Fraction(0)
    acc = Fraction(0)
    for k in range(m):
        acc += math.comb(m + 1, k) * bernoulli(k)
    return -acc / (m + 1)


def bernoulli_poly(m: int, a: float) -> float:
    """Bernoulli polynomial B_m(a), Horner-evaluated from exact coefficients."""
    return _bernoulli_poly_abs(m, a)[0]


def _bernoulli_poly_abs(m: int, a: float) -> tuple[float, float]:
    # (B_m(a), sum_k |coeff_k| |a|^(m-k)); the second value scales the rounding error
    coeffs = [math.comb(m, k) * bernoulli(k) for k in range(m + 1)]
    # coeffs[k] multiplies a**(m-k)
    acc = 0.0
    mag = 0.0
    for c in coeffs:
        acc = acc * a + float(c)
        mag = mag * abs(a) + abs(float(c))
    return acc, mag


@lru_cache(maxsize=None)
def _em_coefficients(order: int) -> tuple[float, ...]:
    # B_{2j} / (2j)! for j = 1..order
    return tuple(float(bernoulli(2 * j) / math.factorial(2 * j)) for j in range(1, order + 1))


def _poch(s: float, m: int) -> float:
    out = 1.0
    for i in range(m):
        out *= s + i
    return out


def _poch_deriv(s: float, m: int) -> float:
    # d/ds of s(s+1)...(s+m-1), without dividing by a possibly-zero factor
    total = 0.0
    for i in range(m):
        prod = 1.0
        for l in range(m):
            if l != i:
                prod *= s + l
        total += prod
    return total


def _is_integer(s: float) -> bool:
    return float(s).is_integer()


def _sin_half_pi(s: float) -> float:
    """sin(pi*s/2), exact when s is an integer."""
    if _is_integer(s):
        return (0.0, 1.0, 0.0, -1.0)[int(s) % 4]
    return math.sin(0.5 * math.pi * s)


def _cos_half_pi(s: float) -> float:
    if _is_integer(s):
        return (1.0, 0.0, -1.0, 0.0)[int(s) % 4]
    return math.cos(0.5 * math.pi * s)


def _em_hurwitz(s: float, a: float, n_terms: int, order: int) -> tuple[float, float]:
    """Euler-Maclaurin value of zeta(s, a) and an error bound."""
    terms = [(k + a) ** (-s) for k in range(n_terms)]
    X = n_terms + a
    terms.append(X ** (1.0 - s) / (s - 1.0))
    terms.append(0.5 * X ** (-s))
    coeffs = _em_coefficients(order + 1)
    corrections = [
        coeffs[j - 1] * _poch(s, 2 * j - 1) * X ** (-s - 2 * j + 1) for j in range(1, order + 1)
    ]
    nxt = coeffs[order] * _poch(s, 2 * order + 1) * X ** (-s - 2 * order - 1)
    value = math.fsum(terms + corrections)
    # pow() is good to ~1 ulp, but rounding k + a is amplified by |s|;
    # the Pochhammer products accumulate up to 2*order
    rounding = (3.0 + abs(s)) * _EPS * math.fsum(map(abs, terms))
    rounding += 4.0 * order * _EPS * math.fsum(map(abs, corrections))
    return value, 2.0 * abs(nxt) + rounding


def _em_hurwitz_deriv(s: float, a: float, n_terms: int, order: int) -> tuple[float, float]:
    """Euler-Maclaurin value of d/ds zeta(s, a) and an error estimate."""
    terms = [-math.log(k + a) * (k + a) ** (-s) for k in range(n_terms)]
    X = n_terms + a
    lx = math.log(X)
    terms.append(-lx * X ** (1.0 - s) / (s - 1.0) - X ** (1.0 - s) / (s - 1.0) ** 2)
    terms.append(-0.5 * lx * X ** (-s))
    coeffs = _em_coefficients(order + 1)

    def corr(j):
        m = 2 * j - 1
        p = -s - 2 * j + 1
        return coeffs[j - 1] * (_poch_deriv(s, m) - lx * _poch(s, m)) * X**p

    for j in range(1, order + 1):
        terms.append(corr(j))
    value = math.fsum(terms)
    bound = 2.0 * abs(corr(order + 1)) + (8.0 + abs(s)) * _EPS * math.fsum(abs(t) for t in terms)
    return value, bound


def riemann_zeta(s: float) -> SpecialValue:
    """Riemann zeta function on the real line.

    For ``s >= 0`` the value comes from Euler-Maclaurin summation; for
    ``s < 0`` from the functional equation, which keeps the absolute error
    at the 1e-15 level (negative even integers return an exact zero).
    """
    s = float(s)
    if s == 1.0:
        raise PoleError("zeta(s) has a pole at s = 1")
    if s >= 0.0:
        v, b = _em_hurwitz(s, 1.0, EM_TERMS, EM_ORDER)
        return SpecialValue(v, b)
    if _is_integer(s) and int(s) % 2 == 0:
        return SpecialValue(0.0, 0.0)
    # zeta(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s) zeta(1-s)
    z1 = riemann_zeta(1.0 - s)
    mag = 2.0**s * math.pi ** (s - 1.0) * math.gamma(1.0 - s)
    chi = mag * _sin_half_pi(s)
    v = chi * z1.value
    # the sine argument carries an absolute rounding error ~ eps * |s|
    bound = abs(chi) * z1.abs_error_bound + 16.0 * _EPS * abs(v)
    bound += 4.0 * _EPS * (1.0 + abs(s)) * abs(mag * z1.value)
    return SpecialValue(v, bound)


def zeta_deriv(s: float) -> SpecialValue:
    """zeta'(s) for real s != 1.

    Uses the differentiated Euler-Maclaurin series for ``s >= -0.5`` and the
    differentiated functional equation below that (near s = 0 its two terms
    cancel).
    """
    s = float(s)
    if s == 1.0:
        raise PoleError("zeta'(s) has a pole at s = 1")
    if s >= -0.5:
        v, b = _em_hurwitz_deriv(s, 1.0, EM_TERMS, EM_ORDER)
        return SpecialValue(v, b)
    # zeta(s) = chi(s) zeta(1-s);  zeta'(s) = chi'(s) zeta(1-s) - chi(s) zeta'(1-s)
    t = 1.0 - s
    g = math.gamma(t)
    pref = 2.0**s * math.pi ** (s - 1.0) * g
    sn, cs = _sin_half_pi(s), _cos_half_pi(s)
    chi = pref * sn
    dchi = pref * ((LOG_2PI - digamma(t)) * sn + 0.5 * math.pi * cs)
    z, dz = riemann_zeta(t), zeta_deriv(t)
    v = dchi * z.value - chi * dz.value
    bound = abs(dchi) * z.abs_error_bound + abs(chi) * dz.abs_error_bound
    bound += 32.0 * _EPS * (abs(dchi * z.value) + abs(chi * dz.value))
    # absolute rounding of the trigonometric arguments, as in riemann_zeta
    dig = abs(LOG_2PI - digamma(t)) + math.pi
    bound += 4.0 * _EPS * (1.0 + abs(s)) * abs(pref) * (dig * abs(z.value) + abs(dz.value))
    return SpecialValue(v, bound)


def riemann_zeta_deriv(point: int) -> SpecialValue:
    """Closed-form zeta'(0) = -log(2 pi)/2 and zeta'(-1) = 1/12 - log(A)."""
    if point == 0:
        return SpecialValue(-0.5 * LOG_2PI, 2.0 * _EPS)
    if point == -1:
        return SpecialValue(1.0 / 12.0 - math.log(GLAISHER), 2.0 * _EPS)
    raise DomainError(f"riemann_zeta_deriv supports points 0 and -1, got {point!r}")


def hurwitz_zeta(s: float, a: float) -> SpecialValue:
    """Hurwitz zeta function zeta(s, a) = sum_{k>=0} (k + a)^(-s).

    Parameters
    ----------
    s : float
        Real order, ``s != 1``.
    a : float
        Shift, ``a > 0``.

    Notes
    -----
    At non-positive integers the value is ``-B_{k+1}(a)/(k+1)``.  For
    ``s < -1`` the Euler-Maclaurin sum cancels badly, so a is reduced to
    (0, 1] and the Hurwitz functional equation is used, with the
    polylogarithm on the unit circle summed as a series in log z.  The error
    bound is relative in nature there: |zeta(s, a)| grows like a^(1-s).
    """
    s = float(s)
    a = float(a)
    if s == 1.0:
        raise PoleError("zeta(s, a) has a pole at s = 1")
    if not a > 0.0:
        raise DomainError("Hurwitz zeta needs a > 0")
    if s <= 0.0 and _is_integer(s):
        k = -int(s)
        # shift a into (0, 1] where B_{k+1} has no large cancellation
        m = math.ceil(a) - 1
        a0 = a - m
        bp, mag = _bernoulli_poly_abs(k + 1, a0)
        shift = [(a0 + j) ** k for j in range(m)]
        v = -bp / (k + 1) - math.fsum(shift)
        bound = 4.0 * (k + 3) * _EPS * mag / (k + 1) + (4.0 + k) * _EPS * (math.fsum(shift) + abs(v))
        return SpecialValue(v, bound)
    if s < -1.0:
        return _hurwitz_negative(s, a)
    v, b = _em_hurwitz(s, a, EM_TERMS, EM_ORDER)
    return SpecialValue(v, b)


def _polylog_unit(s: float, b: float) -> tuple[complex, float]:
    """Li_s(e^(2 pi i b)) for non-integer s > 1 and 0 < b <= 1/2, with an error bound.

    Series in mu = 2 pi i b:  Gamma(1-s) (-mu)^(s-1) + sum_k zeta(s-k) mu^k / k!.
    """
    mu = 2j * math.pi * b
    lead = math.gamma(1.0 - s) * (2.0 * math.pi * b) ** (s - 1.0) * complex(
        math.cos(-0.5 * math.pi * (s - 1.0)), math.sin(-0.5 * math.pi * (s - 1.0))
    )
    terms = [lead]
    err = 0.0
    power = 1.0 + 0j
    for k in range(400):
        z = riemann_zeta(s - k)
        term = z.value * power
        terms.append(term)
        err += z.abs_error_bound * abs(power)
        if k > s + 2 and abs(term) < 1e-18 * abs(terms[0] + terms[1]):
            break
        power *= mu / (k + 1)
    total = complex(math.fsum(x.real for x in terms), math.fsum(x.imag for x in terms))
    err += 8.0 * _EPS * math.fsum(abs(x) for x in terms) + 2.0 * abs(terms[-1])
    return total, err


def _hurwitz_negative(s: float, a: float) -> SpecialValue:
    # zeta(s, a) = zeta(s, a0) - sum_{k<m} (a0 + k)^(-s),  a = a0 + m,  0 < a0 <= 1
    m = math.ceil(a) - 1
    a0 = a - m
    shift = [(a0 + k) ** (-s) for k in range(m)]
    if a0 == 1.0:
        base = riemann_zeta(s)
        v0, e0 = base.value, base.abs_error_bound
    else:
        # zeta(1-r, a0) = 2 Gamma(r) (2 pi)^(-r) Re[e^(-i pi r/2) Li_r(e^(2 pi i a0))]
        r = 1.0 - s
        b = a0 if a0 <= 0.5 else 1.0 - a0
        li, li_err = _polylog_unit(r, b)
        if a0 > 0.5:
            li = li.conjugate()
        pref = 2.0 * math.gamma(r) * (2.0 * math.pi) ** (-r)
        rot = complex(math.cos(-0.5 * math.pi * r), math.sin(-0.5 * math.pi * r))
        v0 = pref * (rot * li).real
        e0 = pref * li_err + 8.0 * _EPS * abs(v0)
    v = v0 - math.fsum(shift)
    return SpecialValue(v, e0 + 4.0 * _EPS * (math.fsum(shift) + abs(v)))


def hurwitz_zeta_deriv0(a: float) -> SpecialValue:
    """d/ds zeta(s, a) at s = 0, i.e. log Gamma(a) - log(2 pi)/2."""
    if not a > 0.0:
        raise DomainError("Hurwitz zeta needs a > 0")
    lg = log_gamma(a)
    v = lg.value - 0.5 * LOG_2PI
    return SpecialValue(v, lg.abs_error_bound + 2.0 * _EPS * (abs(v) + 1.0))


def hurwitz_zeta_deriv(s: float, a: float) -> SpecialValue:
    """d/ds zeta(s, a) for real s != 1 and a > 0.

    Positive-integer shifts reduce to the Riemann case plus a finite sum,
    which is accurate on the whole real line; ``s = 0`` uses Lerch's
    formula; anything else uses the differentiated Euler-Maclaurin sum.
    """
    s = float(s)
    if s == 1.0:
        raise PoleError("zeta(s, a) has a pole at s = 1")
    if not a > 0.0:
        raise DomainError("Hurwitz zeta needs a > 0")
    if s == 0.0:
        return hurwitz_zeta_deriv0(a)
    if _is_integer(a):
        base = zeta_deriv(s)
        extra = [math.log(j) * j ** (-s) for j in range(2, int(a))]
        v = base.value + math.fsum(extra)
        return SpecialValue(v, base.abs_error_bound + 8.0 * _EPS * math.fsum(map(abs, extra)))
    v, b = _em_hurwitz_deriv(s, a, EM_TERMS, EM_ORDER)
    return SpecialValue(v, b)


def log_gamma(x: float) -> SpecialValue:
    """log Gamma(x) for x > 0 (libm ``lgamma``)."""
    if not x > 0.0:
        raise DomainError("log_gamma needs x > 0")
    v = math.lgamma(x)
    return SpecialValue(v, 4.0 * _EPS * max(1.0, abs(v)))


def digamma(x: float) -> float:
    """psi(x) for x > 0: upward recurrence then the asymptotic series."""
    if not x > 0.0:
        raise DomainError("digamma needs x > 0")
    acc = 0.0
    while x < 12.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    p = inv2
    for k in range(1, 9):
        series += float(bernoulli(2 * k)) / (2 * k) * p
        p *= inv2
    return acc + math.log(x) - 0.5 / x - series
