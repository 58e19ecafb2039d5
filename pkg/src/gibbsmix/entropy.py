"""Entropy changes and extractable work for mixing two gases.

A box of ``d`` cells (``d/2`` per side) starts with ``n`` spin-up particles
on the left and ``m`` spin-down particles on the right. The informed observer
sees the spins; the ignorant observer only the cells. All entropies are in
nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .dimensions import Statistics, sector_dimension
from .errors import EmptySystemError, PauliExclusionError
from .exactmath import binomial, ln_ratio, shannon_entropy
from .spin import SectorDistribution, pj_orthogonal, pj_partial, qm_distribution


@dataclass(frozen=True)
class MixingScenario:
    n: int
    m: int
    d: int
    statistics: Statistics = Statistics.BOSON

    def __post_init__(self):
        object.__setattr__(self, "statistics", Statistics.parse(self.statistics))
        for name in ("n", "m", "d"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise TypeError(f"{name} must be an int, got {value!r}")
        if self.n < 0 or self.m < 0:
            raise ValueError("particle numbers must be non-negative")
        if self.n + self.m == 0:
            raise EmptySystemError("need at least one particle")
        if self.d < 2 or self.d % 2:
            raise ValueError(f"d must be even and at least 2, got {self.d}")
        if self.is_fermion and max(self.n, self.m) > self.d // 2:
            raise PauliExclusionError(
                f"{max(self.n, self.m)} fermions cannot fit into {self.d // 2} cells on one side"
            )

    @property
    def N(self) -> int:
        return self.n + self.m

    @property
    def is_fermion(self) -> bool:
        return self.statistics is Statistics.FERMION


def _count(cells: int, particles: int, exclusion: bool) -> int:
    """Ways to place identical particles in cells, with or without exclusion."""
    if exclusion:
        return binomial(cells, particles)
    return binomial(particles + cells - 1, particles)


def initial_count(s: MixingScenario) -> int:
    """Number of equally likely initial configurations (both sides)."""
    half = s.d // 2
    return _count(half, s.n, s.is_fermion) * _count(half, s.m, s.is_fermion)


def initial_entropy(s: MixingScenario) -> float:
    return ln_ratio(initial_count(s))


def classical_delta_s(s: MixingScenario, distinguishable: bool, exclusion: bool = False) -> float:
    """Classical state-counting entropy change.

    ``exclusion`` forbids double occupancy (the classical analogue of
    fermions), replacing every occupancy count C(a+b-1, a) by C(b, a).
    """
    if exclusion and max(s.n, s.m) > s.d // 2:
        raise PauliExclusionError("exclusion needs at most d/2 particles per side")
    half = s.d // 2
    before = _count(half, s.n, exclusion) * _count(half, s.m, exclusion)
    if distinguishable:
        after = _count(s.d, s.n, exclusion) * _count(s.d, s.m, exclusion)
    else:
        after = _count(s.d, s.N, exclusion)
    return ln_ratio(after, before)


def delta_s_informed(s: MixingScenario) -> float:
    after = _count(s.d, s.n, s.is_fermion) * _count(s.d, s.m, s.is_fermion)
    return ln_ratio(after, initial_count(s))


def delta_s_identical(s: MixingScenario) -> float:
    """Entropy change when both gases carry the same spin (J = N/2 only)."""
    if s.is_fermion and s.N > s.d:
        raise PauliExclusionError(f"{s.N} fermions exceed {s.d} cells")
    return ln_ratio(_count(s.d, s.N, s.is_fermion), initial_count(s))


def per_sector_delta_s(s: MixingScenario, j2: int) -> float:
    """Entropy change within the total-spin sector 2J = ``j2``."""
    return ln_ratio(sector_dimension(s.N, s.d, j2, s.statistics), initial_count(s))


def sector_dimensions(s: MixingScenario) -> dict[int, int]:
    """d_J for every sector reachable from the initial state."""
    return {j2: sector_dimension(s.N, s.d, j2, s.statistics) for j2 in range(s.N, abs(s.n - s.m) - 1, -2)}


def _mean_and_variance(p: dict[int, float], values: dict[int, float]) -> tuple[float, float]:
    mean = math.fsum(p[j] * values[j] for j in p)
    var = math.fsum(p[j] * (values[j] - mean) ** 2 for j in p)
    return mean, var


def _sector_values(s: MixingScenario) -> dict[int, float]:
    init = initial_count(s)
    return {j2: ln_ratio(dim, init) for j2, dim in sector_dimensions(s).items()}


def ignorant_statistics(s: MixingScenario) -> tuple[float, float]:
    """Mean and variance over J of the per-sector entropy change."""
    return _mean_and_variance(pj_orthogonal(s.n, s.m).as_floats(), _sector_values(s))


def delta_s_ignorant(s: MixingScenario) -> float:
    return ignorant_statistics(s)[0]


def work_variance(s: MixingScenario) -> float:
    return ignorant_statistics(s)[1]


def delta_s_informed_partial(s: MixingScenario, theta: float) -> float:
    """Informed-observer entropy change with the right spins at angle ``theta``.

    Averages, over the z-spin distribution, the entropy change of a mixture
    with ``N-k`` up and ``k`` down spins.
    """
    init = initial_count(s)
    total = []
    for m2, q in qm_distribution(s.n, s.m, theta).items():
        if q == 0.0:
            continue
        down = (s.N - m2) // 2
        after = _count(s.d, down, s.is_fermion) * _count(s.d, s.N - down, s.is_fermion)
        total.append(q * ln_ratio(after, init))
    return math.fsum(total)


def delta_s_ignorant_partial(s: MixingScenario, theta: float) -> float:
    return _mean_and_variance(pj_partial(s.n, s.m, theta), _sector_values(s))[0]


def extractable_work(delta_s: float, kT: float = 1.0) -> float:
    """Work from an entropy change at temperature ``kT`` (energy units)."""
    if not kT > 0:
        raise ValueError(f"kT must be positive, got {kT!r}")
    return kT * delta_s


@dataclass
class MixingReport:
    scenario: MixingScenario
    delta_s_informed: float
    delta_s_ignorant: float
    delta_s_identical: float
    delta_s_classical_dist: float
    delta_s_classical_indist: float
    shannon_hp: float
    work_variance: float
    probabilities: dict[int, float]
    per_sector_delta_s: dict[int, float]
    sector_dims: dict[int, int]
    sector_distribution: SectorDistribution | None = None  # exact, orthogonal spins only
    theta: float = math.pi
    kT: float = 1.0
    work_informed: float = field(init=False)
    work_ignorant: float = field(init=False)

    def __post_init__(self):
        self.work_informed = extractable_work(self.delta_s_informed, self.kT)
        self.work_ignorant = extractable_work(self.delta_s_ignorant, self.kT)

    def as_dict(self) -> dict:
        sectors = []
        for j2, p in self.probabilities.items():
            exact = self.sector_distribution.probability(j2) if self.sector_distribution else None
            sectors.append(
                {
                    "J2": j2,
                    "p_num": exact.numerator if exact is not None else None,
                    "p_den": exact.denominator if exact is not None else None,
                    "p": p,
                    "dim": self.sector_dims[j2],
                    "delta_s": self.per_sector_delta_s[j2],
                }
            )
        s = self.scenario
        return {
            "n": s.n,
            "m": s.m,
            "d": s.d,
            "statistics": s.statistics.value,
            "theta": self.theta,
            "kT": self.kT,
            "delta_s_informed": self.delta_s_informed,
            "delta_s_ignorant": self.delta_s_ignorant,
            "delta_s_identical": self.delta_s_identical,
            "delta_s_classical_dist": self.delta_s_classical_dist,
            "delta_s_classical_indist": self.delta_s_classical_indist,
            "shannon_hp": self.shannon_hp,
            "work_variance": self.work_variance,
            "work_informed": self.work_informed,
            "work_ignorant": self.work_ignorant,
            "sectors": sectors,
        }


def mixing_report(s: MixingScenario, theta: float | None = None, kT: float = 1.0) -> MixingReport:
    """Every entropy change for ``s``.

    ``theta=None`` means orthogonal spins with exact sector probabilities; any
    angle switches to the partially distinguishable formulas.
    """
    values = _sector_values(s)
    if theta is None:
        exact = pj_orthogonal(s.n, s.m)
        p = exact.as_floats()
        informed = delta_s_informed(s)
        hp = exact.entropy()
        angle = math.pi
    else:
        exact = None
        p = pj_partial(s.n, s.m, theta)
        informed = delta_s_informed_partial(s, theta)
        hp = shannon_entropy(p.values())
        angle = float(theta)
    mean, var = _mean_and_variance(p, values)
    return MixingReport(
        scenario=s,
        delta_s_informed=informed,
        delta_s_ignorant=mean,
        delta_s_identical=delta_s_identical(s),
        delta_s_classical_dist=classical_delta_s(s, True, s.is_fermion),
        delta_s_classical_indist=classical_delta_s(s, False, s.is_fermion),
        shannon_hp=hp,
        work_variance=var,
        probabilities=p,
        per_sector_delta_s=values,
        sector_dims=sector_dimensions(s),
        sector_distribution=exact,
        theta=angle,
        kT=kT,
    )
