"""Total-spin bookkeeping for two coupled groups of spin-1/2 particles.

Angular momentum quantum numbers are passed around doubled (``j2 = 2J``,
``m2 = 2M``) so that half-integers stay integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

from .errors import EmptySystemError
from .exactmath import binomial, factorial, ln_ratio


@dataclass(frozen=True)
class SectorDistribution:
    """Exact distribution over total spin J for ``n`` up and ``m`` down spins.

    Stored as integer weights over a common denominator ``total``; this keeps
    large-N distributions cheap while every probability stays exact.
    """

    n: int
    m: int
    weights: tuple[tuple[int, int], ...]  # (2J, weight), 2J strictly decreasing
    total: int

    def __post_init__(self):
        if sum(w for _, w in self.weights) != self.total:
            raise ValueError("sector weights do not sum to the denominator")

    @property
    def N(self) -> int:
        return self.n + self.m

    @property
    def j2_values(self) -> list[int]:
        return [j2 for j2, _ in self.weights]

    @cached_property
    def probabilities(self) -> dict[int, Fraction]:
        return {j2: Fraction(w, self.total) for j2, w in self.weights}

    def probability(self, j2: int) -> Fraction:
        return self.probabilities.get(j2, Fraction(0))

    def as_floats(self) -> dict[int, float]:
        return {j2: w / self.total for j2, w in self.weights}

    def entropy(self) -> float:
        """Shannon entropy H(p) in nats, straight from the integer weights."""
        return -math.fsum(w / self.total * ln_ratio(w, self.total) for _, w in self.weights if w)

    def __len__(self):
        return len(self.weights)


def pj_orthogonal(n: int, m: int) -> SectorDistribution:
    """Sector weights p_J = (2J+1) n! m! / ((N/2+J+1)! (N/2-J)!).

    Uses the equivalent integer form (2J+1) C(N+1, N/2-J) / ((N+1) C(N, n)).
    Sectors below |n-m|/2 have zero weight and are omitted.
    """
    if n < 0 or m < 0:
        raise ValueError("particle numbers must be non-negative")
    N = n + m
    if N == 0:
        raise EmptySystemError("need at least one particle")
    weights = []
    c = 1  # C(N+1, k) with k = (N - 2J) / 2
    for k in range(min(n, m) + 1):
        j2 = N - 2 * k
        weights.append((j2, (j2 + 1) * c))
        c = c * (N + 1 - k) // (k + 1)
    return SectorDistribution(n, m, tuple(weights), (N + 1) * binomial(N, n))


def _valid(j2: int, m2: int) -> bool:
    return j2 >= 0 and abs(m2) <= j2 and (j2 - m2) % 2 == 0


@lru_cache(maxsize=65536)
def cg_squared(j1: int, m1: int, j2: int, m2: int, J: int, M: int) -> Fraction:
    """|<j1 m1; j2 m2 | J M>|^2 exactly, all arguments doubled.

    Racah's closed form, evaluated as (rational sum)^2 times a rational
    prefactor. Returns 0 for any forbidden coupling.
    """
    if not (_valid(j1, m1) and _valid(j2, m2) and _valid(J, M)):
        return Fraction(0)
    if m1 + m2 != M or J > j1 + j2 or J < abs(j1 - j2) or (j1 + j2 + J) % 2:
        return Fraction(0)
    # undouble; every combination below is an integer
    a = (j1 + j2 - J) // 2
    b = (j1 - j2 + J) // 2
    c = (-j1 + j2 + J) // 2
    terms = Fraction(0)
    kmin = max(0, (j2 - J - m1) // 2, (j1 - J + m2) // 2)
    kmax = min(a, (j1 - m1) // 2, (j2 + m2) // 2)
    for k in range(kmin, kmax + 1):
        den = (
            factorial(k)
            * factorial(a - k)
            * factorial((j1 - m1) // 2 - k)
            * factorial((j2 + m2) // 2 - k)
            * factorial((J - j2 + m1) // 2 + k)
            * factorial((J - j1 - m2) // 2 + k)
        )
        terms += Fraction(-1 if k % 2 else 1, den)
    pre = Fraction(
        (J + 1)
        * factorial(a)
        * factorial(b)
        * factorial(c)
        * factorial((j1 + m1) // 2)
        * factorial((j1 - m1) // 2)
        * factorial((j2 + m2) // 2)
        * factorial((j2 - m2) // 2)
        * factorial((J + M) // 2)
        * factorial((J - M) // 2),
        factorial((j1 + j2 + J) // 2 + 1),
    )
    return pre * terms * terms


def _check_theta(theta: float) -> float:
    theta = float(theta)
    if not 0.0 <= theta <= math.pi:
        raise ValueError(f"theta must lie in [0, pi], got {theta!r}")
    return theta


def qm_distribution(n: int, m: int, theta: float) -> dict[int, float]:
    """Distribution of total z-spin when the right-hand spins sit at angle theta.

    Keys are 2M, from n+m down to n-m. The number of flipped right spins is
    binomial with success probability sin^2(theta/2).
    """
    theta = _check_theta(theta)
    if n + m == 0:
        raise EmptySystemError("need at least one particle")
    up = math.cos(theta / 2) ** 2
    down = math.sin(theta / 2) ** 2
    return {n + m - 2 * k: binomial(m, k) * up ** (m - k) * down**k for k in range(m + 1)}


def pj_partial(n: int, m: int, theta: float) -> dict[int, float]:
    """Sector distribution for partially distinguishable spins.

    Averages the squared Clebsch-Gordan weight of each z-spin block over
    :func:`qm_distribution`. Keys are 2J, from N down to |n-m|.
    """
    q = qm_distribution(n, m, theta)
    N = n + m
    out = {}
    for J in range(N, abs(n - m) - 1, -2):
        out[J] = math.fsum(qM * float(cg_squared(n, n, m, M - n, J, M)) for M, qM in q.items())
    return out
