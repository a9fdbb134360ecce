"""Exact state counts Omega(E), Omega(N, E) and D(E) with Python integers.

``count_states`` expands the Euler product prod (1 - q^lambda)^-mult up to
``q^e_max``.  Two interchangeable routes are provided:

``"species"``
    one in-place ascending scan ``a[E] += a[E - lambda]`` per copy of
    each eigenvalue, done slice-wise so the inner loop runs in C;
``"euler"``
    the log-derivative recurrence E * Omega(E) = sum_k sigma(k) Omega(E-k)
    with sigma(k) = sum_{lambda | k} lambda * mult(lambda), which costs
    O(e_max^2) regardless of multiplicities.

``brute_force_oracle`` and ``pentagonal_oracle`` are independent checks.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from operator import add, mul
from typing import Iterator

from .errors import DomainError, TruncationError
from .spectrum import SpectrumModel

__all__ = [
    "CountTable",
    "JointTable",
    "CumulativeTable",
    "count_states",
    "count_joint",
    "cumulative",
    "fugacity_weighted",
    "brute_force_oracle",
    "pentagonal_oracle",
    "enumerate_occupations",
    "BRUTE_FORCE_MAX",
]

BRUTE_FORCE_MAX = 30
# above this many scalar updates the species route switches to the recurrence
_SPECIES_BUDGET = 20_000_000


@dataclass(frozen=True)
class CountTable:
    model: SpectrumModel
    e_max: int
    omega: tuple[int, ...]

    def __getitem__(self, E: int) -> int:
        return self.omega[E]

    def __len__(self):
        return len(self.omega)


@dataclass(frozen=True)
class JointTable:
    """Omega(N, E) for 1 <= N <= n_max and 0 <= E <= e_max.

    ``omegaNE[N - 1][E]`` holds Omega(N, E); :meth:`get` also answers N = 0.
    """

    model: SpectrumModel
    e_max: int
    n_max: int
    omegaNE: tuple[tuple[int, ...], ...]

    def get(self, N: int, E: int) -> int:
        if N == 0:
            return 1 if E == 0 else 0
        return self.omegaNE[N - 1][E]


@dataclass(frozen=True)
class CumulativeTable:
    model: SpectrumModel
    e_max: int
    d: tuple[int, ...]


def _levels(model: SpectrumModel, e_max: int) -> list[tuple[int, int]]:
    if model.valid_up_to < e_max:
        raise TruncationError(
            f"spectrum truncated below e_max: horizon {model.horizon} < {e_max}"
        )
    return list(itertools.takewhile(lambda p: p[0] <= e_max, model.iter_eigenvalues()))


def _scan_species(a: list[int], lam: int, copies: int) -> None:
    # a <- a / (1 - q^lam)^copies, in place; a[E] += a[E-lam] ascending, slice-wise
    size = len(a)
    for _ in range(copies):
        for start in range(lam, size, lam):
            stop = min(start + lam, size)
            a[start:stop] = map(add, a[start:stop], a[start - lam : stop - lam])


def _count_species(levels, e_max: int) -> list[int]:
    a = [1] + [0] * e_max
    for lam, mult in levels:
        _scan_species(a, lam, mult)
    return a


def _count_euler(levels, e_max: int) -> list[int]:
    sigma = [0] * (e_max + 1)
    for lam, mult in levels:
        w = lam * mult
        for k in range(lam, e_max + 1, lam):
            sigma[k] += w
    a = [1] + [0] * e_max
    for E in range(1, e_max + 1):
        s = sum(map(mul, sigma[1 : E + 1], reversed(a[:E])))
        q, r = divmod(s, E)
        if r:
            raise ArithmeticError(f"non-integral recurrence step at E={E}")
        a[E] = q
    return a


def count_states(model: SpectrumModel, e_max: int, method: str = "auto") -> CountTable:
    """Omega(E) for E = 0..e_max.

    Parameters
    ----------
    model : SpectrumModel
    e_max : int
        Largest energy, ``>= 0``.
    method : {"auto", "species", "euler"}
        ``"auto"`` picks the species scan unless the total number of copies
        makes it expensive.

    Raises
    ------
    TruncationError
        A custom spectrum with a horizon below ``e_max``.
    """
    if e_max < 0:
        raise DomainError("e_max must be non-negative")
    levels = _levels(model, e_max)
    if method == "auto":
        work = sum(mult * (e_max - lam + 1) for lam, mult in levels)
        method = "species" if work <= _SPECIES_BUDGET else "euler"
    if method == "species":
        omega = _count_species(levels, e_max)
    elif method == "euler":
        omega = _count_euler(levels, e_max)
    else:
        raise ValueError(f"unknown method {method!r}")
    return CountTable(model, e_max, tuple(omega))


def count_joint(model: SpectrumModel, e_max: int, n_max: int) -> JointTable:
    """Omega(N, E) by adding one particle species at a time."""
    if e_max < 0:
        raise DomainError("e_max must be non-negative")
    if n_max < 1:
        raise DomainError("n_max must be ≥ 1")
    levels = _levels(model, e_max)
    rows = [[1] + [0] * e_max] + [[0] * (e_max + 1) for _ in range(n_max)]
    for lam, mult in levels:
        for _ in range(mult):
            # ascending N: rows[N-1] already holds configurations using this species
            for N in range(1, n_max + 1):
                cur, prev = rows[N], rows[N - 1]
                cur[lam:] = map(add, cur[lam:], prev[: e_max + 1 - lam])
    return JointTable(model, e_max, n_max, tuple(tuple(r) for r in rows[1:]))


def cumulative(table: CountTable) -> CumulativeTable:
    """D(E) = sum_{L <= E} Omega(L)."""
    return CumulativeTable(table.model, table.e_max, tuple(itertools.accumulate(table.omega)))


def fugacity_weighted(joint: JointTable, mu: float) -> list[float]:
    """Omega(E, mu) = sum_N Omega(N, E) e^(N mu) for E = 0..e_max.

    The N = 0 term contributes only at E = 0, so ``mu = 0`` reproduces
    Omega(E).  Requires ``mu <= 0`` and a complete particle-number range.
    """
    if mu > 0:
        raise DomainError("chemical potential must be ≤ 0")
    lam_min = joint.model.lambda_min
    needed = joint.e_max // lam_min if lam_min else 0
    if joint.n_max < needed:
        raise DomainError(
            f"n_max={joint.n_max} incomplete: need ≥ {needed} particles for e_max={joint.e_max}"
        )
    weights = [math.exp(N * mu) for N in range(1, joint.n_max + 1)]
    out = []
    for E in range(joint.e_max + 1):
        terms = [w * row[E] for w, row in zip(weights, joint.omegaNE) if row[E]]
        out.append(math.fsum(terms) + (1.0 if E == 0 else 0.0))
    return out


def enumerate_occupations(model: SpectrumModel, E: int) -> Iterator[tuple[int, ...]]:
    """Yield every occupation vector (one entry per eigenvalue copy) with energy E.

    Species are the individual copies of the eigenvalues <= E, in order.
    Exponential; intended for tiny E only.
    """
    species = [lam for lam, mult in _levels(model, E) for _ in range(mult)]

    def rec(i, remaining):
        if i == len(species):
            if remaining == 0:
                yield ()
            return
        lam = species[i]
        for k in range(remaining // lam + 1):
            for rest in rec(i + 1, remaining - k * lam):
                yield (k,) + rest

    yield from rec(0, E)


def brute_force_oracle(model: SpectrumModel, e_max: int) -> CountTable:
    """Omega(E) by summing over the occupation number of every species copy.

    ways(i, r) = sum_{k >= 0} ways(i + 1, r - k * lambda_i): the number of
    occupation sequences of species i, i+1, ... with total energy r.  Each
    copy of a degenerate eigenvalue is its own species.
    """
    if e_max > BRUTE_FORCE_MAX:
        raise DomainError(f"brute force refuses e_max > {BRUTE_FORCE_MAX}")
    if e_max < 0:
        raise DomainError("e_max must be non-negative")
    species = [lam for lam, mult in _levels(model, e_max) for _ in range(mult)]
    # ways after the last species: only the empty remainder is reachable
    ways = [1] + [0] * e_max
    for lam in reversed(species):
        ways = [
            sum(ways[r - k * lam] for k in range(r // lam + 1)) for r in range(e_max + 1)
        ]
    return CountTable(model, e_max, tuple(ways))


def pentagonal_oracle(e_max: int) -> CountTable:
    """p(E) for E = 0..e_max from Euler's pentagonal-number recurrence."""
    if e_max < 0:
        raise DomainError("e_max must be non-negative")
    p = [1] + [0] * e_max
    for E in range(1, e_max + 1):
        total = 0
        for k in itertools.count(1):
            g1 = k * (3 * k - 1) // 2
            if g1 > E:
                break
            g2 = g1 + k
            term = p[E - g1] + (p[E - g2] if g2 <= E else 0)
            total += term if k % 2 else -term
        p[E] = total
    return CountTable(SpectrumModel.partitions(), e_max, tuple(p))
