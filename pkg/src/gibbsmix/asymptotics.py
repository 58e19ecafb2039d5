"""Limits and expansion terms used as convergence checks on the exact formulas."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .dimensions import Statistics, sector_dimension
from .entropy import MixingScenario, ignorant_statistics
from .exactmath import binomial, ln_ratio
from .spin import pj_orthogonal

EULER_GAMMA = float(np.euler_gamma)
# H(p) ~ ln(n)/2 + HP_OFFSET for n = m -> infinity
HP_OFFSET = EULER_GAMMA / 2 - math.log(2) + 1
# mean ignorant entropy change for d = 2 bosons ~ ln(n)/2 + BEC_OFFSET
BEC_OFFSET = math.log(2) - EULER_GAMMA / 2
BEC_VARIANCE = math.pi**2 / 24


@dataclass(frozen=True)
class ExpansionTerms:
    """First- and second-order terms of ln(d_J / (p_J C^2)) in 1/d."""

    r1: Fraction
    r2: Fraction


def expansion_terms(n: int, d: int | Fraction, j2: int, statistics: Statistics | str = Statistics.BOSON) -> ExpansionTerms:
    """Per-sector low-density expansion terms for ``n = m``.

    Pass ``d=1`` to get the bare coefficients of 1/d and 1/d^2.
    """
    if j2 < 0 or j2 > 2 * n or j2 % 2:
        raise ValueError(f"2J={j2} is not a sector of {2 * n} spins")
    J = Fraction(j2, 2)
    c = J * (J + 1)
    d = Fraction(d)
    r1 = (c - n) / d
    r2 = (2 * n * n - 2 * n * (2 * c + 1) + c * (c + 2)) / (2 * d * d)
    if Statistics.parse(statistics) is Statistics.FERMION:
        r1 = -r1
    return ExpansionTerms(r1, r2)


def first_order_sum(n: int, d: int | Fraction = 1, statistics: Statistics | str = Statistics.BOSON) -> Fraction:
    """sum_J p_J R1(J); vanishes identically."""
    p = pj_orthogonal(n, n).probabilities
    return sum((pj * expansion_terms(n, d, j2, statistics).r1 for j2, pj in p.items()), Fraction(0))


def second_order_sum(n: int, d: int | Fraction = 1, statistics: Statistics | str = Statistics.BOSON) -> Fraction:
    """sum_J p_J (R2 - R1^2 / 2); equals -n^2 / (2 d^2)."""
    p = pj_orthogonal(n, n).probabilities
    total = Fraction(0)
    for j2, pj in p.items():
        t = expansion_terms(n, d, j2, statistics)
        total += pj * (t.r2 - t.r1 * t.r1 / 2)
    return total


def ignorance_gap(s: MixingScenario) -> float:
    """Informed minus ignorant entropy change, one exact ratio per sector.

    Avoids subtracting two large, nearly equal floats.
    """
    if s.is_fermion:
        informed = binomial(s.d, s.n) * binomial(s.d, s.m)
    else:
        informed = binomial(s.n + s.d - 1, s.n) * binomial(s.m + s.d - 1, s.m)
    dist = pj_orthogonal(s.n, s.m)
    return math.fsum(
        w / dist.total * ln_ratio(informed, sector_dimension(s.N, s.d, j2, s.statistics)) for j2, w in dist.weights
    )


def sector_entropy(n: int, m: int | None = None) -> float:
    """H(p) of the orthogonal-spin sector distribution (default m = n)."""
    return pj_orthogonal(n, n if m is None else m).entropy()


def low_density_gap_prediction(n: int, d: int) -> float:
    """Predicted informed-ignorant gap H(p) + n^2/(2 d^2) for n = m, d >> n^2."""
    return sector_entropy(n) + n * n / (2 * d * d)


def low_density_residual(n: int, d: int, statistics: Statistics | str = Statistics.BOSON) -> float:
    """Exact gap minus its second-order prediction; O(n^3/d^3)."""
    return ignorance_gap(MixingScenario(n, n, d, statistics)) - low_density_gap_prediction(n, d)


def hp_asymptote(n: int) -> float:
    if n < 1:
        raise ValueError("n must be positive")
    return 0.5 * math.log(n) + HP_OFFSET


def bec_limit_mean(n: int) -> float:
    """Large-n mean ignorant entropy change for bosons in d = 2 cells."""
    if n < 1:
        raise ValueError("n must be positive")
    return 0.5 * math.log(n) + BEC_OFFSET


def bec_statistics(n: int) -> tuple[float, float]:
    """Exact (mean, variance) of the ignorant entropy change at d = 2, n = m."""
    return ignorant_statistics(MixingScenario(n, n, 2, Statistics.BOSON))
