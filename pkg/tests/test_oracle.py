import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gibbsmix.dimensions import SectorDimensionTable
from gibbsmix.entropy import MixingScenario, delta_s_ignorant_partial
from gibbsmix.errors import ResourceError
from gibbsmix.oracle import (
    Configuration,
    DenseOperator,
    _permutation_indices,
    configurations,
    initial_thermal_state,
    oracle_cap,
    oracle_delta_s_ignorant,
    run_verification,
    sector_dimensions_bruteforce,
    sector_probabilities,
    spin_partial_trace,
    symmetrized_state,
    total_spin_projectors,
    twirl_spatial,
    verification_grid,
    von_neumann_entropy,
)
from gibbsmix.spin import pj_partial

LN2 = math.log(2)


def _random_density(dim, rng, rank=None):
    a = rng.normal(size=(dim, rank or dim)) + 1j * rng.normal(size=(dim, rank or dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def _perm_matrix(perm, d):
    idx = _permutation_indices(perm, d)
    P = np.zeros((d ** len(perm),) * 2)
    P[np.arange(len(idx)), idx] = 1
    return P


def test_two_particle_state():
    config = Configuration((1,), (1,))
    rho = symmetrized_state(config, math.pi, "boson", d=2)
    psi = np.zeros(16)
    # local index = cell * 2 + spin: |cell0 up> = 0, |cell1 down> = 3
    psi[0 * 4 + 3] = psi[3 * 4 + 0] = 1 / math.sqrt(2)
    assert np.allclose(rho.matrix, np.outer(psi, psi))


def test_identical_spins_factor_out():
    rho = symmetrized_state(Configuration((1, 0), (0, 1)), 0.0, "fermion")
    assert abs(rho.trace() - 1) < 1e-12
    from gibbsmix.oracle import _spin_reduced

    sigma = _spin_reduced(rho)
    up_up = np.zeros(4)
    up_up[0] = 1
    assert np.allclose(sigma, np.outer(up_up, up_up))


def test_configuration_rules():
    with pytest.raises(ValueError):
        symmetrized_state(Configuration((2,), (0,)), math.pi, "fermion")
    with pytest.raises(ValueError):
        Configuration((1, 0), (1,))
    assert len(configurations(1, 1, 4, "boson")) == 4
    assert len(configurations(2, 1, 6, "fermion")) == 3 * 3
    assert len(configurations(2, 0, 6, "boson")) == 6
    config = Configuration.from_cells([0, 0], [3], 4)
    assert config == Configuration((2, 0), (0, 1))
    assert config.particle_cells() == ([0, 0], [3])


def test_initial_states():
    rho = initial_thermal_state(1, 1, 2, math.pi, "boson")
    assert abs(np.trace(rho.matrix @ rho.matrix) - 1) < 1e-12
    rho = initial_thermal_state(1, 1, 4, math.pi, "boson")
    vals = np.linalg.eigvalsh(rho.matrix)
    assert np.allclose(sorted(vals)[-4:], [0.25] * 4) and abs(vals.sum() - 1) < 1e-12
    for args in [(2, 1, 4, 1.0, "boson"), (1, 2, 4, 0.3, "fermion"), (0, 3, 2, 2.0, "boson")]:
        assert abs(initial_thermal_state(*args).trace() - 1) < 1e-12


def test_resource_cap(monkeypatch):
    with pytest.raises(ResourceError):
        initial_thermal_state(2, 2, 4, math.pi, "boson")
    assert oracle_cap() == 1500
    monkeypatch.setenv("GIBBS_ORACLE_CAP", "5000")
    assert oracle_cap() == 5000
    assert abs(initial_thermal_state(2, 2, 4, math.pi, "boson").trace() - 1) < 1e-12
    with pytest.raises(ResourceError):
        oracle_delta_s_ignorant(1, 1, 4, math.pi, "boson", cap=63)


def test_partial_trace():
    psi = np.zeros(4)
    psi[2 * 1 + 0] = 1  # cell 1, spin up
    rho = DenseOperator(np.outer(psi, psi).astype(complex), 1, 2)
    assert np.allclose(spin_partial_trace(rho).matrix, np.diag([0, 1]))
    rho = initial_thermal_state(1, 1, 2, math.pi, "boson")
    rho_x = spin_partial_trace(rho)
    assert np.allclose(rho_x.matrix, np.diag([0, 0.5, 0.5, 0]))
    with pytest.raises(ValueError):
        spin_partial_trace(rho_x)
    rng = np.random.default_rng(1)
    big = DenseOperator(_random_density(36, rng), 2, 3)
    assert abs(spin_partial_trace(big).trace() - 1) < 1e-12


@pytest.mark.parametrize("N, ranks", [(1, {1: 2}), (2, {2: 3, 0: 1}), (3, {3: 4, 1: 4}), (4, {4: 5, 2: 9, 0: 2})])
def test_spin_projectors(N, ranks):
    projs = total_spin_projectors(N)
    assert {j: round(np.trace(P).real) for j, P in projs.items()} == ranks
    assert np.allclose(sum(projs.values()), np.eye(2**N))
    for P in projs.values():
        assert np.allclose(P @ P, P)


def test_sector_probability_examples():
    p = sector_probabilities(initial_thermal_state(1, 1, 2, math.pi, "boson"))
    assert p == pytest.approx({2: 0.5, 0: 0.5}, abs=1e-10)
    p = sector_probabilities(initial_thermal_state(2, 1, 4, math.pi, "boson"))
    assert p == pytest.approx({3: 1 / 3, 1: 2 / 3}, abs=1e-10)
    p = sector_probabilities(initial_thermal_state(2, 1, 4, 0.0, "fermion"))
    assert p[3] == pytest.approx(1.0, abs=1e-10)
    p = sector_probabilities(initial_thermal_state(1, 1, 4, math.pi / 2, "boson"))
    assert p == pytest.approx({2: 0.75, 0: 0.25}, abs=1e-10)


def test_bruteforce_dimension_examples():
    assert sector_dimensions_bruteforce(2, 2, "boson") == {2: 3, 0: 1}
    assert sector_dimensions_bruteforce(2, 4, "fermion") == {2: 6, 0: 10}


@pytest.mark.parametrize("stats", ["boson", "fermion"])
def test_bruteforce_dimensions_agree(stats):
    for N in range(1, 5):
        for d in range(2, 5):
            assert sector_dimensions_bruteforce(N, d, stats) == SectorDimensionTable.build(N, d, stats).dims


def test_twirl_examples():
    for N, d in [(2, 3), (3, 2), (2, 2)]:
        dim = d**N
        mixed = DenseOperator(np.eye(dim, dtype=complex) / dim, N, d, with_spin=False)
        assert np.allclose(twirl_spatial(mixed).matrix, mixed.matrix, atol=1e-10)
    # symmetric pure state on two cells, d = 3: twirl spreads it over the symmetric block
    psi = np.zeros(9)
    psi[0 * 3 + 1] = psi[1 * 3 + 0] = 1 / math.sqrt(2)
    out = twirl_spatial(DenseOperator(np.outer(psi, psi).astype(complex), 2, 3, with_spin=False))
    sym = (np.eye(9) + _perm_matrix((1, 0), 3)) / 2
    assert np.allclose(out.matrix, sym / 6)


def test_twirl_reproduces_two_particle_formula():
    rho_x = spin_partial_trace(initial_thermal_state(1, 1, 2, math.pi, "boson"))
    out = twirl_spatial(rho_x)
    # p_0 = 1/2 spread over d_0 = 1 state, p_1 = 1/2 over d_1 = 3 states
    assert np.linalg.eigvalsh(out.matrix) == pytest.approx([1 / 6, 1 / 6, 1 / 6, 1 / 2], abs=1e-12)
    gain = von_neumann_entropy(out) - von_neumann_entropy(rho_x)
    assert gain == pytest.approx(0.5 * math.log(0.75) + LN2, abs=1e-10)


@settings(deadline=None, max_examples=25)
@given(st.sampled_from([(2, 2), (2, 3), (3, 2), (2, 4), (3, 3)]), st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_twirl_properties(shape, seed, rank):
    N, d = shape
    rng = np.random.default_rng(seed)
    rho = DenseOperator(_random_density(d**N, rng, rank), N, d, with_spin=False)
    once = twirl_spatial(rho)
    twice = twirl_spatial(once)
    assert np.abs(once.matrix - twice.matrix).max() < 1e-9
    assert abs(once.trace() - 1) < 1e-10
    assert von_neumann_entropy(once) >= von_neumann_entropy(rho) - 1e-9
    # the image commutes with every u^{x N}
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    u, _ = np.linalg.qr(z)
    U = u
    for _ in range(N - 1):
        U = np.kron(U, u)
    assert np.abs(U @ once.matrix - once.matrix @ U).max() < 1e-9
    # permutation-invariant inputs (every physical rho_x) stay permutation invariant
    perms = [_perm_matrix(p, d) for p in itertools.permutations(range(N))]
    sym = sum(P @ rho.matrix @ P.T for P in perms) / len(perms)
    out = twirl_spatial(DenseOperator(sym, N, d, with_spin=False)).matrix
    for P in perms:
        assert np.abs(P @ out - out @ P).max() < 1e-9


def test_twirl_of_physical_states_commutes_with_permutations():
    for args in [(2, 1, 2, 1.0, "boson"), (1, 2, 4, 2.0, "fermion"), (1, 1, 6, 0.5, "boson")]:
        out = twirl_spatial(spin_partial_trace(initial_thermal_state(*args))).matrix
        N, d = args[0] + args[1], args[2]
        for p in itertools.permutations(range(N)):
            P = _perm_matrix(p, d)
            assert np.abs(P @ out - out @ P).max() < 1e-9


def test_von_neumann_entropy():
    psi = np.array([1, 1j]) / math.sqrt(2)
    assert abs(von_neumann_entropy(np.outer(psi, psi.conj()))) < 1e-10
    for k in (1, 2, 7, 30):
        assert von_neumann_entropy(np.eye(k) / k) == pytest.approx(math.log(k), abs=1e-10)
    with pytest.raises(ValueError):
        von_neumann_entropy(np.diag([1.1, -0.1]))


def test_oracle_examples():
    assert oracle_delta_s_ignorant(1, 1, 2, math.pi, "boson") == pytest.approx(0.5 * math.log(0.75) + LN2, abs=1e-8)
    assert oracle_delta_s_ignorant(1, 1, 4, math.pi, "fermion") == pytest.approx(
        oracle_delta_s_ignorant(1, 1, 4, math.pi, "boson"), abs=1e-8
    )
    assert oracle_delta_s_ignorant(1, 1, 4, 0.0, "boson") == pytest.approx(math.log(5 / 4) + LN2, abs=1e-8)


def test_end_to_end_d4():
    rho_x = spin_partial_trace(initial_thermal_state(1, 1, 4, math.pi, "boson"))
    # 2 ln 2 from the four configurations, plus ln 2 from the exchange term
    assert von_neumann_entropy(rho_x) == pytest.approx(3 * LN2, abs=1e-10)
    gain = von_neumann_entropy(twirl_spatial(rho_x)) - von_neumann_entropy(rho_x)
    assert gain == pytest.approx(delta_s_ignorant_partial(MixingScenario(1, 1, 4), math.pi), abs=1e-8)


@settings(deadline=None, max_examples=30)
@given(
    st.sampled_from([(1, 1, 2), (1, 1, 6), (2, 1, 4), (1, 2, 2), (2, 2, 2), (3, 0, 4), (0, 2, 8), (3, 1, 2)]),
    st.floats(0, math.pi),
    st.sampled_from(["boson", "fermion"]),
)
def test_formula_matches_oracle(nmd, theta, stats):
    n, m, d = nmd
    if stats == "fermion" and max(n, m) > d // 2:
        return
    s = MixingScenario(n, m, d, stats)
    assert abs(oracle_delta_s_ignorant(n, m, d, theta, stats) - delta_s_ignorant_partial(s, theta)) <= 1e-7
    probs = sector_probabilities(initial_thermal_state(n, m, d, theta, stats))
    expected = pj_partial(n, m, theta)
    assert max(abs(probs[k] - expected.get(k, 0.0)) for k in probs) <= 1e-9


def test_grid_shape():
    grid = verification_grid(64)
    shapes = {(c.N, c.d) for c in grid}
    assert {N for N, _ in shapes} == {1, 2, 3}
    assert {d for N, d in shapes if N == 2} == {2, 4}
    assert all((2 * c.d) ** c.N <= 64 and c.d % 2 == 0 for c in grid)
    assert not any(c.statistics.value == "fermion" and max(c.n, c.m) > c.d // 2 for c in grid)
    assert len(verification_grid(64, "boson", thetas=[math.pi], max_particles=2)) == 32 + 6


def test_small_grid_passes_and_perturbation_fails():
    cases = verification_grid(64)
    assert all(r.passed() for r in run_verification(cases))
    assert not any(r.passed() for r in run_verification(cases[:10], perturb=1e-6))
