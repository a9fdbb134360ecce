"""Integer eigenvalue sequences and their spectral-zeta data.

A model is a stream of ``(lambda, mult)`` pairs with strictly increasing
positive integer eigenvalues.  Three kinds exist:

* ``partitions``: lambda = l, mult = 1 (ordinary integer partitions), n = 1;
* ``sphere(n)``: lambda = k + n - 1 with the spherical-harmonic dimension
  of degree k on S^n as multiplicity (n >= 2);
* ``custom``: a finite user list, optionally declared complete only up to
  a horizon.

Built-in models carry a closed-form :class:`ZetaProfile` (residues of the
spectral zeta function at its positive poles, its value and derivative at
0, and the derived constants); custom models need one supplied explicitly.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Sequence

from . import specfun
from .errors import ParseError, ProfileUnavailable, SpectrumError

__all__ = [
    "SpectrumModel",
    "ZetaProfile",
    "eigenvalues_up_to",
    "zeta_profile",
    "load_custom_spectrum",
    "load_profile",
    "parse_model",
    "sphere_multiplicity",
    "sphere_mult_polynomial",
]

PARTITIONS = "partitions"
SPHERE = "sphere"
CUSTOM = "custom"


def sphere_multiplicity(n: int, k: int) -> int:
    """Dimension of the degree-k spherical harmonics on S^n (k >= 0)."""
    # harmonic polynomials of degree k in n+1 variables: C(k+n, n) - C(k+n-2, n)
    total = math.comb(k + n, n)
    if k >= 2:
        total -= math.comb(k + n - 2, n)
    return total


def sphere_mult_polynomial(n: int) -> list[Fraction]:
    """Coefficients c_i (ascending) with mult = sum_i c_i * lambda**i on S^n.

    With lambda = k + n - 1 the multiplicity is
    (2 lambda - n + 1) * prod_{j=1}^{n-2} (lambda - j) / (n-1)!,
    which also vanishes at lambda = 1, ..., n - 2.
    """
    poly = [Fraction(1 - n), Fraction(2)]
    for j in range(1, n - 1):
        nxt = [Fraction(0)] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i + 1] += c
            nxt[i] -= j * c
        poly = nxt
    fact = math.factorial(n - 1)
    return [c / fact for c in poly]


@dataclass(frozen=True)
class SpectrumModel:
    """An integer spectrum with multiplicities.

    Use the :meth:`partitions`, :meth:`sphere` and :meth:`custom`
    constructors rather than building instances directly.
    """

    kind: str
    n: int
    pairs: tuple[tuple[int, int], ...] = ()
    horizon: int | None = None

    def __post_init__(self):
        if self.kind not in (PARTITIONS, SPHERE, CUSTOM):
            raise SpectrumError(f"unknown model kind {self.kind!r}")
        if not (isinstance(self.n, int) and self.n >= 1):
            raise SpectrumError("dimension n must be a positive integer")
        if self.kind == SPHERE and self.n < 2:
            raise SpectrumError("sphere(1) has a zero eigenvalue; use n >= 2")
        if self.kind == PARTITIONS and self.n != 1:
            raise SpectrumError("the partitions model has n = 1")
        if self.kind == CUSTOM:
            prev = 0
            for lam, mult in self.pairs:
                if not (isinstance(lam, int) and isinstance(mult, int)):
                    raise SpectrumError("eigenvalues and multiplicities must be integers")
                if lam < 1:
                    raise SpectrumError("λ must be ≥ 1")
                if mult < 1:
                    raise SpectrumError("multiplicity must be ≥ 1")
                if lam == prev:
                    raise SpectrumError(f"duplicate eigenvalue {lam}")
                if lam < prev:
                    raise SpectrumError("eigenvalues must be sorted")
                prev = lam
            if self.horizon is not None and self.horizon < 1:
                raise SpectrumError("horizon must be ≥ 1")

    @classmethod
    def partitions(cls) -> "SpectrumModel":
        return cls(PARTITIONS, 1)

    @classmethod
    def sphere(cls, n: int) -> "SpectrumModel":
        return cls(SPHERE, n)

    @classmethod
    def custom(cls, pairs, n: int, horizon: int | None = None) -> "SpectrumModel":
        """Finite spectrum from ``(lambda, mult)`` pairs.

        ``horizon=None`` declares the list to be the whole spectrum; an
        integer declares it complete only for eigenvalues up to ``horizon``.
        """
        return cls(CUSTOM, n, tuple((int(l), int(m)) for l, m in pairs), horizon)

    @property
    def is_finite(self) -> bool:
        return self.kind == CUSTOM

    @property
    def lambda_min(self) -> int | None:
        """Smallest eigenvalue, or None for an empty custom list."""
        if self.kind == PARTITIONS:
            return 1
        if self.kind == SPHERE:
            return self.n - 1
        return self.pairs[0][0] if self.pairs else None

    @property
    def valid_up_to(self) -> float:
        """Largest eigenvalue up to which the stored spectrum is exact."""
        if self.kind != CUSTOM or self.horizon is None:
            return math.inf
        return self.horizon

    def multiplicity(self, lam: int) -> int:
        if self.kind == PARTITIONS:
            return 1 if lam >= 1 else 0
        if self.kind == SPHERE:
            return sphere_multiplicity(self.n, lam - self.n + 1) if lam >= self.n - 1 else 0
        return dict(self.pairs).get(lam, 0)

    def iter_eigenvalues(self) -> Iterator[tuple[int, int]]:
        """Yield ``(lambda, mult)`` pairs in increasing order (endless for built-ins)."""
        if self.kind == PARTITIONS:
            return ((lam, 1) for lam in itertools.count(1))
        if self.kind == SPHERE:
            n = self.n
            return ((k + n - 1, sphere_multiplicity(n, k)) for k in itertools.count())
        return iter(self.pairs)

    def label(self) -> str:
        if self.kind == SPHERE:
            return f"sphere:{self.n}"
        if self.kind == CUSTOM:
            return f"custom(n={self.n}, {len(self.pairs)} levels)"
        return PARTITIONS


def eigenvalues_up_to(model: SpectrumModel, lambda_max: int) -> list[tuple[int, int]]:
    """All ``(lambda, mult)`` pairs of ``model`` with ``lambda <= lambda_max``."""
    if lambda_max < 1:
        raise SpectrumError("lambda_max must be ≥ 1")
    return list(itertools.takewhile(lambda p: p[0] <= lambda_max, model.iter_eigenvalues()))


@dataclass(frozen=True)
class ZetaProfile:
    """Pole and value data of a spectral zeta function Z(s) = sum lambda^-s.

    ``A[j]`` is the residue at ``s = n - j``; ``K[j] = A[j] zeta(n-j+1)
    Gamma(n-j)`` are the coefficients of the principal part of log G.
    """

    n: int
    A: tuple[float, ...]
    K: tuple[float, ...]
    Z0: float
    Zprime0: float
    detP: float
    volSigma: float
    Bn: float

    @classmethod
    def from_residues(cls, n: int, A: Sequence[float], Z0: float, Zprime0: float) -> "ZetaProfile":
        if len(A) != n:
            raise SpectrumError(f"need {n} residues, got {len(A)}")
        A = tuple(float(a) for a in A)
        K = tuple(
            a * specfun.riemann_zeta(n - j + 1).value * math.gamma(n - j) for j, a in enumerate(A)
        )
        if not K[0] > 0.0:
            raise SpectrumError("leading residue must be positive (K_0 > 0)")
        vol = A[0] * (2.0 * math.pi) ** n
        Bn = (n + 1) * (K[0] / n**n) ** (1.0 / (n + 1))
        return cls(n, A, K, float(Z0), float(Zprime0), math.exp(-Zprime0), vol, Bn)

    def bn_from_volume(self) -> float:
        """The growth constant written through Vol(Sigma) instead of K_0."""
        n = self.n
        inner = self.volSigma / (2.0 * math.pi * n) ** n
        inner *= specfun.riemann_zeta(n + 1).value * math.gamma(n)
        return (n + 1) * inner ** (1.0 / (n + 1))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "A": list(self.A),
            "K": list(self.K),
            "Z0": self.Z0,
            "Zprime0": self.Zprime0,
            "detP": self.detP,
            "volSigma": self.volSigma,
            "Bn": self.Bn,
        }


def _partitions_profile() -> ZetaProfile:
    return ZetaProfile.from_residues(
        1, [1.0], specfun.riemann_zeta(0).value, specfun.riemann_zeta_deriv(0).value
    )


def _sphere_profile(n: int) -> ZetaProfile:
    # Z(s) = sum_i c_i * zeta_H(s - i, n - 1); zeta_H(s - i, a) has residue 1 at s = i + 1
    c = sphere_mult_polynomial(n)
    a = n - 1
    A = [float(c[n - 1 - j]) for j in range(n)]
    Z0 = math.fsum(float(ci) * specfun.hurwitz_zeta(-i, a).value for i, ci in enumerate(c))
    Zp0 = math.fsum(float(ci) * specfun.hurwitz_zeta_deriv(-i, a).value for i, ci in enumerate(c))
    return ZetaProfile.from_residues(n, A, Z0, Zp0)


def zeta_profile(model: SpectrumModel) -> ZetaProfile:
    """Closed-form zeta profile of a built-in model."""
    if model.kind == PARTITIONS:
        return _partitions_profile()
    if model.kind == SPHERE:
        return _sphere_profile(model.n)
    raise ProfileUnavailable(
        "profile unavailable for custom spectra; supply one explicitly (e.g. --profile file.json)"
    )


def load_profile(path) -> ZetaProfile:
    """Read a profile JSON document ``{"n", "A", "Z0", "Zprime0"}``."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        return ZetaProfile.from_residues(int(doc["n"]), doc["A"], doc["Z0"], doc["Zprime0"])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, SpectrumError):
            raise
        raise ParseError(f"{path}: bad profile document ({exc})") from exc


def _parse_int(tok: str, what: str, lineno: int) -> int:
    if not tok.isascii() or not tok.lstrip("+-").isdigit():
        raise ParseError(f"line {lineno}: {what} must be an integer, got {tok!r}")
    return int(tok)


def load_custom_spectrum(path) -> SpectrumModel:
    """Parse a custom spectrum file.

    The first line is ``# n=<int>``; an optional ``# horizon=<int>`` comment
    marks the list as complete only up to that eigenvalue.  Every other
    non-comment line is ``<lambda> <mult>``.
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or not lines[0].replace(" ", "").startswith("#n="):
        raise ParseError("line 1: expected header '# n=<int>'")
    n = _parse_int(lines[0].split("=", 1)[1].strip(), "n", 1)
    horizon = None
    pairs: list[tuple[int, int]] = []
    seen: set[int] = set()
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].replace(" ", "")
            if body.startswith("horizon="):
                horizon = _parse_int(body.split("=", 1)[1], "horizon", lineno)
            continue
        toks = line.split()
        if len(toks) != 2:
            raise ParseError(f"line {lineno}: expected '<λ> <mult>', got {raw!r}")
        lam = _parse_int(toks[0], "λ", lineno)
        mult = _parse_int(toks[1], "multiplicity", lineno)
        if lam < 1:
            raise ParseError(f"line {lineno}: λ must be ≥ 1")
        if mult < 1:
            raise ParseError(f"line {lineno}: multiplicity must be ≥ 1")
        if lam in seen:
            raise ParseError(f"line {lineno}: duplicate eigenvalue {lam}")
        seen.add(lam)
        pairs.append((lam, mult))
    if n < 1:
        raise ParseError("line 1: n must be ≥ 1")
    return SpectrumModel.custom(sorted(pairs), n, horizon)


def parse_model(spec: str) -> SpectrumModel:
    """``"partitions"``, ``"sphere:<n>"`` or ``"custom:<path>"``."""
    if spec == PARTITIONS:
        return SpectrumModel.partitions()
    kind, _, arg = spec.partition(":")
    if kind == SPHERE and arg.isdigit():
        return SpectrumModel.sphere(int(arg))
    if kind == CUSTOM and arg:
        return load_custom_spectrum(arg)
    raise SpectrumError(f"unknown model {spec!r} (expected partitions, sphere:<n>, custom:<path>)")
