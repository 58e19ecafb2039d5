"""Dimensions of the spatial irreps paired with each total-spin sector.

Two independent routes: the closed forms for two-row diagrams (bosons) and
their transposes (fermions), and the general Weyl product formula.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import comb, factorial, prod

from .errors import ConsistencyError, NonexistentSectorError


class Statistics(str, Enum):
    BOSON = "boson"
    FERMION = "fermion"

    @classmethod
    def parse(cls, value: "Statistics | str") -> "Statistics":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"statistics must be 'boson' or 'fermion', got {value!r}") from None


@dataclass(frozen=True)
class YoungDiagramTwoRow:
    row1: int
    row2: int

    def __post_init__(self):
        if self.row2 < 0 or self.row1 < self.row2:
            raise ValueError(f"not a Young diagram: ({self.row1}, {self.row2})")

    @classmethod
    def from_spin(cls, N: int, j2: int) -> "YoungDiagramTwoRow":
        """lambda = (N/2 + J, N/2 - J)."""
        _check_sector(N, j2)
        return cls((N + j2) // 2, (N - j2) // 2)

    @property
    def N(self) -> int:
        return self.row1 + self.row2

    def transpose(self) -> tuple[int, ...]:
        return (2,) * self.row2 + (1,) * (self.row1 - self.row2)


def _check_sector(N: int, j2: int) -> None:
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    if not 0 <= j2 <= N or (N - j2) % 2:
        raise ValueError(f"2J={j2} is not a valid total spin for N={N} spins")


def _split(N: int, d: int, j2: int) -> tuple[int, int]:
    _check_sector(N, j2)
    if d < 2:
        raise ValueError(f"need d >= 2 cells, got {d}")
    return (N - j2) // 2, (N + j2) // 2  # N/2 - J, N/2 + J


def _exact_div(num: int, den: int) -> int:
    q, r = divmod(num, den)
    if r:
        raise ConsistencyError(f"dimension formula gave non-integer {num}/{den}")
    return q


def dim_boson_sector(N: int, d: int, j2: int) -> int:
    """Dimension of the spatial irrep with the same two-row diagram as spin J.

    (2J+1) (N/2-J+d-2)! (N/2+J+d-1)! / ((N/2-J)! (N/2+J+1)! (d-1)! (d-2)!),
    regrouped into binomials.
    """
    lo, hi = _split(N, d, j2)
    return _exact_div((j2 + 1) * comb(lo + d - 2, lo) * comb(hi + d - 1, d - 2), d - 1)


def dim_fermion_sector(N: int, d: int, j2: int) -> int:
    """Dimension of the spatial irrep with the transposed diagram of spin J.

    (2J+1) d! (d+1)! / ((N/2+J+1)! (N/2-J)! (d-N/2+J+1)! (d-N/2-J)!),
    regrouped into binomials.
    """
    lo, hi = _split(N, d, j2)
    if hi > d:
        raise NonexistentSectorError(f"fermionic sector 2J={j2} needs {hi} rows but only {d} cells")
    return _exact_div((j2 + 1) * comb(d + 1, hi + 1) * comb(d, lo), d - lo + 1)


def sector_dimension(N: int, d: int, j2: int, statistics: Statistics | str) -> int:
    if Statistics.parse(statistics) is Statistics.BOSON:
        return dim_boson_sector(N, d, j2)
    return dim_fermion_sector(N, d, j2)


def weyl_dimension(rows: tuple[int, ...] | list[int], d: int) -> int:
    """U(d) irrep dimension for the diagram ``rows`` (Weyl product formula)."""
    rows = [r for r in rows if r > 0]
    if any(a < b for a, b in zip(rows, rows[1:])):
        raise ValueError(f"rows must be non-increasing: {rows}")
    if len(rows) > d:
        raise NonexistentSectorError(f"diagram with {len(rows)} rows does not fit in d={d}")
    shifted = [(rows[i] if i < len(rows) else 0) + d - 1 - i for i in range(d)]
    num = prod(shifted[i] - shifted[j] for i in range(d) for j in range(i + 1, d))
    den = prod(factorial(k) for k in range(1, d))
    return _exact_div(num, den)


def dim_weyl_two_row(diagram: YoungDiagramTwoRow, d: int, transpose: bool = False) -> int:
    rows = diagram.transpose() if transpose else (diagram.row1, diagram.row2)
    return weyl_dimension(rows, d)


@dataclass(frozen=True)
class SectorDimensionTable:
    N: int
    d: int
    statistics: Statistics
    dims: dict[int, int]  # 2J -> d_J, only sectors that exist

    @classmethod
    def build(cls, N: int, d: int, statistics: Statistics | str) -> "SectorDimensionTable":
        statistics = Statistics.parse(statistics)
        dims = {}
        for j2 in range(N, -1, -2):
            if statistics is Statistics.FERMION and (N + j2) // 2 > d:
                continue
            dims[j2] = sector_dimension(N, d, j2, statistics)
        return cls(N, d, statistics, dims)
