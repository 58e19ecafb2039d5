"""Brute-force first-quantisation checks.

States live on (cells x spin)^N with each particle's local index
``cell * 2 + spin``; particle 0 is the most significant tensor factor.
Everything here is dense linear algebra built from explicit permutations and
deliberately shares no code with the closed-form modules it verifies.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass

import numpy as np

from .dimensions import Statistics
from .errors import ConsistencyError, ResourceError

DEFAULT_CAP = 1500
THETAS = (0.0, math.pi / 3, math.pi / 2, 2 * math.pi / 3, math.pi)


def oracle_cap(cap: int | None = None) -> int:
    """Largest allowed full-space dimension (2d)^N; env GIBBS_ORACLE_CAP overrides the default."""
    if cap is not None:
        return int(cap)
    return int(os.environ.get("GIBBS_ORACLE_CAP", DEFAULT_CAP))


def _check_size(N: int, d: int, cap: int | None) -> None:
    limit = oracle_cap(cap)
    if (2 * d) ** N > limit:
        raise ResourceError(f"(2d)^N = {(2 * d) ** N} exceeds the oracle cap {limit}")


@dataclass
class DenseOperator:
    matrix: np.ndarray
    n_particles: int
    cells: int
    with_spin: bool = True

    @property
    def local_dim(self) -> int:
        return 2 * self.cells if self.with_spin else self.cells

    def __post_init__(self):
        dim = self.local_dim**self.n_particles
        if self.matrix.shape != (dim, dim):
            raise ValueError(f"matrix shape {self.matrix.shape} does not match dimension {dim}")

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))


@dataclass(frozen=True)
class Configuration:
    """Cell occupations on the left and right halves of the box."""

    left: tuple[int, ...]
    right: tuple[int, ...]

    def __post_init__(self):
        if len(self.left) != len(self.right):
            raise ValueError("both sides must have d/2 cells")
        if min(self.left + self.right, default=0) < 0:
            raise ValueError("occupations must be non-negative")

    @classmethod
    def from_cells(cls, left_cells, right_cells, d: int) -> "Configuration":
        """Build from per-particle cell indices; right cells are numbered d/2..d-1."""
        half = d // 2
        left, right = [0] * half, [0] * half
        for c in left_cells:
            if not 0 <= c < half:
                raise ValueError(f"left cell {c} outside 0..{half - 1}")
            left[c] += 1
        for c in right_cells:
            if not half <= c < d:
                raise ValueError(f"right cell {c} outside {half}..{d - 1}")
            right[c - half] += 1
        return cls(tuple(left), tuple(right))

    @property
    def d(self) -> int:
        return 2 * len(self.left)

    def particle_cells(self) -> tuple[list[int], list[int]]:
        half = len(self.left)
        lcells = [i for i, k in enumerate(self.left) for _ in range(k)]
        rcells = [half + i for i, k in enumerate(self.right) for _ in range(k)]
        return lcells, rcells


def _parity(perm) -> int:
    perm = list(perm)
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _cycles(perm) -> int:
    seen = [False] * len(perm)
    count = 0
    for i in range(len(perm)):
        if not seen[i]:
            count += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
    return count


def _symmetrize(tensor: np.ndarray, fermion: bool) -> np.ndarray:
    """Sum of all N! factor permutations of ``tensor``, signed for fermions."""
    out = np.zeros_like(tensor)
    for perm in itertools.permutations(range(tensor.ndim)):
        sign = _parity(perm) if fermion else 1
        out += sign * np.transpose(tensor, perm)
    return out


def _spinor(theta: float) -> np.ndarray:
    return np.array([math.cos(theta / 2), math.sin(theta / 2)], dtype=complex)


def _symmetrized_vector(config: Configuration, theta: float, statistics: Statistics) -> np.ndarray:
    fermion = Statistics.parse(statistics) is Statistics.FERMION
    if fermion and max(config.left + config.right) > 1:
        raise ValueError("fermionic configuration with a doubly occupied cell")
    return _vector_from_cells(*config.particle_cells(), config.d, theta, fermion)


def _vector_from_cells(lcells, rcells, d: int, theta: float, fermion: bool) -> np.ndarray:
    up = np.array([1.0, 0.0], dtype=complex)
    rotated = _spinor(theta)
    factors = []
    for cell, spin in [(c, up) for c in lcells] + [(c, rotated) for c in rcells]:
        v = np.zeros(2 * d, dtype=complex)
        v[2 * cell : 2 * cell + 2] = spin
        factors.append(v)
    tensor = factors[0]
    for v in factors[1:]:
        tensor = np.multiply.outer(tensor, v)
    psi = _symmetrize(np.asarray(tensor), fermion).ravel()
    norm = np.linalg.norm(psi)
    if norm < 1e-12:
        raise ValueError("configuration is annihilated by antisymmetrisation")
    return psi / norm


def symmetrized_state(config: Configuration, theta: float, statistics: Statistics | str, d: int | None = None,
                      cap: int | None = None) -> DenseOperator:
    """Projector onto the (anti)symmetrised state of one cell configuration.

    Left particles carry spin up, right particles the spinor at angle theta.
    """
    if d is not None and d != config.d:
        raise ValueError(f"configuration has {config.d} cells, expected {d}")
    N = sum(config.left) + sum(config.right)
    _check_size(N, config.d, cap)
    psi = _symmetrized_vector(config, theta, Statistics.parse(statistics))
    return DenseOperator(np.outer(psi, psi.conj()), N, config.d)


def configurations(n: int, m: int, d: int, statistics: Statistics | str) -> list[Configuration]:
    """Every way to place n particles in the left cells and m in the right cells."""
    fermion = Statistics.parse(statistics) is Statistics.FERMION
    return [Configuration.from_cells(lc, rc, d) for lc, rc in _cell_choices(n, m, d, fermion)]


def _cell_choices(n: int, m: int, d: int, fermion: bool) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Occupied cells per particle: left cells from 0, right cells from d/2."""
    half = d // 2
    choose = itertools.combinations if fermion else itertools.combinations_with_replacement
    rights = [tuple(half + c for c in rc) for rc in choose(range(half), m)]
    return [(lc, rc) for lc in choose(range(half), n) for rc in rights]


def initial_thermal_state(n: int, m: int, d: int, theta: float, statistics: Statistics | str,
                          cap: int | None = None) -> DenseOperator:
    """Uniform mixture of the symmetrised states of all configurations."""
    _check_size(n + m, d, cap)
    statistics = Statistics.parse(statistics)
    fermion = statistics is Statistics.FERMION
    configs = _cell_choices(n, m, d, fermion)
    dim = (2 * d) ** (n + m)
    rho = np.zeros((dim, dim), dtype=complex)
    for lcells, rcells in configs:
        psi = _vector_from_cells(lcells, rcells, d, theta, fermion)
        # states are sparse; only touch their support
        nz = np.flatnonzero(psi)
        rho[np.ix_(nz, nz)] += np.outer(psi[nz], psi[nz].conj())
    rho /= len(configs)
    return DenseOperator(rho, n + m, d)


def _interleaved(op: DenseOperator) -> np.ndarray:
    if not op.with_spin:
        raise ValueError("operator has no spin factors")
    N, d = op.n_particles, op.cells
    return op.matrix.reshape([d, 2] * N * 2)


def spin_partial_trace(rho: DenseOperator) -> DenseOperator:
    """Trace out every spin factor, leaving an operator on (cells)^N."""
    N, d = rho.n_particles, rho.cells
    t = _interleaved(rho)
    ket = [x for k in range(N) for x in (k, N + k)]
    bra = [x for k in range(N) for x in (2 * N + k, N + k)]
    out = list(range(N)) + list(range(2 * N, 3 * N))
    reduced = np.einsum(t, ket + bra, out).reshape(d**N, d**N)
    return DenseOperator(reduced, N, d, with_spin=False)


def _spin_reduced(rho: DenseOperator) -> np.ndarray:
    """Trace out the cells, leaving a 2^N x 2^N spin operator."""
    N = rho.n_particles
    t = _interleaved(rho)
    ket = [x for k in range(N) for x in (k, N + k)]
    bra = [x for k in range(N) for x in (k, 2 * N + k)]
    out = list(range(N, 2 * N)) + list(range(2 * N, 3 * N))
    return np.einsum(t, ket + bra, out).reshape(2**N, 2**N)


def _permutation_indices(perm, local_dim: int) -> np.ndarray:
    """idx with (P x)[a] = x[idx[a]] for the factor permutation ``perm``."""
    N = len(perm)
    return np.arange(local_dim**N).reshape((local_dim,) * N).transpose(perm).ravel()


def total_spin_casimir(N: int) -> np.ndarray:
    """S^2 on N spin-1/2 factors, assembled from pairwise swaps.

    S_i . S_j = (2 SWAP_ij - 1) / 4 gives S^2 = N(4 - N)/4 + sum_{i<j} SWAP_ij.
    """
    dim = 2**N
    s2 = np.eye(dim) * (N * (4 - N) / 4)
    rows = np.arange(dim)
    for i, j in itertools.combinations(range(N), 2):
        perm = list(range(N))
        perm[i], perm[j] = j, i
        idx = _permutation_indices(perm, 2)
        s2[rows, idx] += 1.0
    return s2


def _snap_j2(eigenvalue: float) -> int:
    j = (-1 + math.sqrt(max(1 + 4 * eigenvalue, 0.0))) / 2
    j2 = round(2 * j)
    if abs(eigenvalue - j2 / 2 * (j2 / 2 + 1)) > 1e-8:
        raise ConsistencyError(f"S^2 eigenvalue {eigenvalue} is not of the form J(J+1)")
    return j2


def total_spin_projectors(N: int) -> dict[int, np.ndarray]:
    """Eigenprojectors of S^2 on (C^2)^N keyed by 2J."""
    if N < 1:
        raise ValueError("N must be positive")
    vals, vecs = np.linalg.eigh(total_spin_casimir(N))
    groups: dict[int, list[int]] = {}
    for k, v in enumerate(vals):
        groups.setdefault(_snap_j2(v), []).append(k)
    return {
        j2: vecs[:, cols] @ vecs[:, cols].T
        for j2, cols in sorted(groups.items(), reverse=True)
    }


def sector_probabilities(rho: DenseOperator, N: int | None = None, d: int | None = None) -> dict[int, float]:
    """tr[rho (I_cells x P_spin^J)] for every total spin J."""
    if (N is not None and N != rho.n_particles) or (d is not None and d != rho.cells):
        raise ValueError("operator layout does not match (N, d)")
    sigma = _spin_reduced(rho)
    return {
        j2: float(np.real(np.einsum("ab,ba->", sigma, proj)))
        for j2, proj in total_spin_projectors(rho.n_particles).items()
    }


def _physical_basis(labels_list, N: int, d: int, fermion: bool) -> np.ndarray:
    """Rows: normalised (anti)symmetrised product states, one per label tuple."""
    rows = []
    for labels in labels_list:
        tensor = np.zeros((2 * d,) * N)
        tensor[labels] = 1.0
        v = _symmetrize(np.asarray(tensor), fermion).ravel()
        rows.append(v / np.linalg.norm(v))
    return np.array(rows)


def sector_dimensions_bruteforce(N: int, d: int, statistics: Statistics | str, cap: int | None = None) -> dict[int, int]:
    """Spatial sector dimensions from S^2 multiplicities inside P_+/- space.

    S^2 leaves cells untouched, so inside the physical subspace it is block
    diagonal in the multiset of occupied cells; each block is diagonalised
    separately. The memory guard compares (physical dimension) x (2d)^N with
    cap^2, i.e. the full isometry may be as large as one cap x cap operator.
    """
    fermion = Statistics.parse(statistics) is Statistics.FERMION
    phys = math.comb(2 * d, N) if fermion else math.comb(2 * d + N - 1, N)
    limit = oracle_cap(cap)
    if phys * (2 * d) ** N > limit**2:
        raise ResourceError(f"isometry of {phys} x {(2 * d) ** N} exceeds cap {limit}^2")
    choose = itertools.combinations if fermion else itertools.combinations_with_replacement
    blocks: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for labels in choose(range(2 * d), N):
        blocks.setdefault(tuple(a // 2 for a in labels), []).append(labels)
    s2 = total_spin_casimir(N)
    order = [0] + [1 + 2 * k for k in range(N)] + [2 + 2 * k for k in range(N)]
    counts: dict[int, int] = {}
    for labels_list in blocks.values():
        rows = _physical_basis(labels_list, N, d, fermion)
        # reorder each state to (cells..., spins...) and apply S^2 to the spin block
        k = len(rows)
        rows = rows.reshape([k] + [d, 2] * N).transpose(order).reshape(k, d**N, 2**N)
        block = np.tensordot(rows, rows @ s2, axes=([1, 2], [1, 2]))
        for v in np.linalg.eigvalsh((block + block.T) / 2):
            j2 = _snap_j2(v)
            counts[j2] = counts.get(j2, 0) + 1
    dims = {}
    for j2, mult in sorted(counts.items(), reverse=True):
        q, r = divmod(mult, j2 + 1)
        if r:
            raise ConsistencyError(f"multiplicity {mult} of 2J={j2} is not divisible by 2J+1")
        dims[j2] = q
    return dims


def twirl_spatial(rho_x: DenseOperator, N: int | None = None, d: int | None = None, validate: bool = True) -> DenseOperator:
    """Haar average over u^{(x)N}, computed as the Hilbert-Schmidt projection
    onto the span of the N! cell-permutation operators."""
    if rho_x.with_spin:
        raise ValueError("twirl acts on the spatial operator; trace out spins first")
    N = rho_x.n_particles if N is None else N
    d = rho_x.cells if d is None else d
    if (N, d) != (rho_x.n_particles, rho_x.cells):
        raise ValueError("operator layout does not match (N, d)")
    perms = list(itertools.permutations(range(N)))
    idx = [_permutation_indices(p, d) for p in perms]
    rows = np.arange(d**N)
    mat = rho_x.matrix
    t = np.array([mat[rows, ix].sum() for ix in idx])
    inv = [tuple(np.argsort(p)) for p in perms]
    gram = np.array(
        [[float(d) ** _cycles([s_inv[k] for k in tau]) for tau in perms] for s_inv in inv]
    )
    coeffs = np.linalg.lstsq(gram, t, rcond=None)[0]
    out = np.zeros_like(mat)
    for c, ix in zip(coeffs, idx):
        out[rows, ix] += c
    result = DenseOperator(out, N, d, with_spin=False)
    if validate:
        if abs(result.trace() - rho_x.trace()) > 1e-8 or np.abs(out - out.conj().T).max() > 1e-8:
            raise ConsistencyError("twirl output is not a trace-preserved Hermitian operator")
        if _eigvalsh(out).min() < -1e-8:
            raise ConsistencyError("twirl output is not positive semidefinite")
    return result


def _eigvalsh(mat: np.ndarray) -> np.ndarray:
    # exactly diagonal input (common for single particles) skips the O(n^3) solve
    if np.count_nonzero(mat - np.diag(np.diagonal(mat))) == 0:
        return np.sort(np.real(np.diagonal(mat)))
    return np.linalg.eigvalsh((mat + mat.conj().T) / 2)


def von_neumann_entropy(rho: DenseOperator | np.ndarray) -> float:
    """-tr(rho ln rho) in nats."""
    mat = rho.matrix if isinstance(rho, DenseOperator) else np.asarray(rho)
    vals = _eigvalsh(mat)
    if vals.min() < -1e-10:
        raise ValueError(f"operator has negative eigenvalue {vals.min():.3e}")
    vals = vals[vals > 0]
    return float(-np.sum(vals * np.log(vals)))


def oracle_delta_s_ignorant(n: int, m: int, d: int, theta: float, statistics: Statistics | str,
                            cap: int | None = None) -> float:
    """S(twirl(rho_x)) - S(rho_x) for the initial thermal state."""
    rho_x = spin_partial_trace(initial_thermal_state(n, m, d, theta, statistics, cap))
    return von_neumann_entropy(twirl_spatial(rho_x, validate=False)) - von_neumann_entropy(rho_x)


@dataclass(frozen=True)
class OracleCase:
    n: int
    m: int
    d: int
    theta: float
    statistics: Statistics

    @property
    def N(self) -> int:
        return self.n + self.m


@dataclass
class CaseResult:
    case: OracleCase
    formula: float
    oracle: float
    p_error: float  # max |p_J formula - p_J oracle|
    dim_error: int  # max |d_J formula - d_J brute force|

    @property
    def difference(self) -> float:
        return abs(self.formula - self.oracle)

    def passed(self, tol: float = 1e-7) -> bool:
        return self.difference <= tol and self.p_error <= tol and self.dim_error == 0


def verification_grid(cap: int | None = None, statistics=None, thetas=THETAS, max_particles: int | None = None) -> list[OracleCase]:
    """All valid (n, m, d, theta, statistics) with even d and (2d)^N within the cap."""
    limit = oracle_cap(cap)
    stats = [Statistics.parse(statistics)] if statistics is not None else list(Statistics)
    cases = []
    N = 1
    while 4**N <= limit and (max_particles is None or N <= max_particles):
        d = 2
        while (2 * d) ** N <= limit:
            for n in range(N, -1, -1):
                for st in stats:
                    if st is Statistics.FERMION and max(n, N - n) > d // 2:
                        continue
                    cases.extend(OracleCase(n, N - n, d, float(t), st) for t in thetas)
            d += 2
        N += 1
    return cases


def check_case(case: OracleCase, cap: int | None = None, perturb: float = 0.0, _dims_cache: dict | None = None) -> CaseResult:
    """Compare the closed forms with the brute-force oracle for one case.

    ``perturb`` shifts the formula value; it exists only to test the harness.
    """
    # imported here so the oracle's own machinery stays free of the formula modules
    from .dimensions import SectorDimensionTable
    from .entropy import MixingScenario, delta_s_ignorant_partial
    from .spin import pj_partial

    n, m, d, theta, st = case.n, case.m, case.d, case.theta, case.statistics
    rho = initial_thermal_state(n, m, d, theta, st, cap)
    probs = sector_probabilities(rho)
    rho_x = spin_partial_trace(rho)
    del rho
    oracle = von_neumann_entropy(twirl_spatial(rho_x, validate=False)) - von_neumann_entropy(rho_x)
    formula = delta_s_ignorant_partial(MixingScenario(n, m, d, st), theta) + perturb

    expected = pj_partial(n, m, theta)
    p_error = max(abs(probs.get(j2, 0.0) - expected.get(j2, 0.0)) for j2 in set(probs) | set(expected))

    key = (case.N, d, st)
    cache = {} if _dims_cache is None else _dims_cache
    if key not in cache:
        brute = sector_dimensions_bruteforce(case.N, d, st, cap)
        exact = SectorDimensionTable.build(case.N, d, st).dims
        cache[key] = max(abs(brute.get(j2, 0) - exact.get(j2, 0)) for j2 in set(brute) | set(exact))
    return CaseResult(case, formula, oracle, p_error, cache[key])


def run_verification(cases, cap: int | None = None, perturb: float = 0.0) -> list[CaseResult]:
    dims_cache: dict = {}
    return [check_case(c, cap, perturb, dims_cache) for c in cases]
