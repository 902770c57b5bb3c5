import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from logfactor import BosonicConfig, LevelOutOfRangeError, contact_matrix, contact_matrix_element
from logfactor.bosonic import (
    bosonic_amplitude_from_ordinary,
    bosonic_configs,
    contact_overlap,
    normalization,
    ordinary_amplitude_from_bosonic,
    permutation_count,
)
from logfactor.potential import make_grid, solve_eigenproblem

from oracles import trapezoid_overlap


def test_normalization_examples():
    assert normalization([2]) == 1.0
    assert normalization([1, 1]) == pytest.approx(1 / math.sqrt(2))
    assert normalization([1, 1, 1]) == pytest.approx(1 / math.sqrt(6))


def _sym_state_norm(levels, M=4):
    """Norm of sum over distinct permutations of |levels>, built as an explicit tensor."""
    psi = np.zeros((M,) * len(levels))
    for perm in set(itertools.permutations(levels)):
        psi[perm] += 1.0
    return np.linalg.norm(psi)


@pytest.mark.parametrize("levels", [(0, 0), (0, 1), (0, 1, 2), (1, 1, 3), (0, 0, 2, 3)])
def test_normalization_makes_unit_state(levels):
    cfg = BosonicConfig(levels)
    assert cfg.norm_factor * _sym_state_norm(levels) == pytest.approx(1.0)


@given(st.lists(st.integers(0, 5), min_size=1, max_size=6))
def test_norm_squared_times_permutations_is_one(levels):
    cfg = BosonicConfig(tuple(levels))
    assert cfg.levels == tuple(sorted(levels))
    assert cfg.norm_factor**2 * len(set(itertools.permutations(levels))) == pytest.approx(1.0)


def test_amplitude_conversion():
    assert bosonic_amplitude_from_ordinary(0.3, [1, 1]) == pytest.approx(0.3 * math.sqrt(2))
    assert bosonic_amplitude_from_ordinary(0.7, [3]) == 0.7
    assert ordinary_amplitude_from_bosonic(0.3 * math.sqrt(2), [1, 1]) == pytest.approx(0.3)


def test_bosonic_sum_equals_ordinary_sum_on_toy_space():
    rng = np.random.default_rng(3)
    basis = bosonic_configs(2, 1)  # (0,0), (0,1), (1,1)
    bB = rng.normal(size=len(basis))
    bB /= np.linalg.norm(bB)
    ordinary = 0.0
    for pair in itertools.product(range(2), repeat=2):
        c = BosonicConfig(pair)
        ordinary += ordinary_amplitude_from_bosonic(bB[basis.index(c)], c.multiplicities) ** 2
    assert ordinary == pytest.approx(float(np.sum(bB**2)))


def test_bosonic_sum_completeness_two_bosons_four_levels():
    basis = bosonic_configs(2, 3)
    assert len(basis) == math.comb(4 + 2 - 1, 2)
    covered = sorted(p for c in basis for p in set(itertools.permutations(c.levels)))
    assert covered == sorted(itertools.product(range(4), repeat=2))


def test_parity_rule(grid7):
    ground = BosonicConfig.ground(2)
    assert contact_matrix_element(grid7, ground, BosonicConfig.of(1, 2)) == 0.0
    assert contact_matrix_element(grid7, BosonicConfig.ground(3), BosonicConfig.of(1, 1, 1)) == 0.0


def test_n35_element_positive_and_quadrature_agrees(grid16):
    w = contact_matrix_element(grid16, BosonicConfig.ground(2), BosonicConfig.of(2, 4))
    assert w > 0
    w_trap = contact_matrix_element(grid16, BosonicConfig.ground(2), BosonicConfig.of(2, 4), rule="trapezoid")
    assert w == pytest.approx(w_trap, rel=1e-8)
    phis = [grid16.phi(i) for i in (0, 0, 2, 4)]
    assert w == pytest.approx(trapezoid_overlap(grid16.xi, phis) * math.sqrt(2), rel=1e-8)


def test_refined_grid_agrees():
    # harmonic oscillator eigenfunctions are known in closed form
    for h in (0.02, 0.005):
        xi = make_grid(12.0, h)
        E, phi = solve_eigenproblem(xi, 0.5 * xi**2, 3)
        g0 = np.pi**-0.25 * np.exp(-(xi**2) / 2)
        g2 = np.pi**-0.25 * (1 - 2 * xi**2) / np.sqrt(2) * np.exp(-(xi**2) / 2)
        exact = trapezoid_overlap(xi, [g0, g0, g0, g2])
        assert trapezoid_overlap(xi, [phi[0], phi[0], phi[0], phi[2]]) == pytest.approx(exact, rel=5 * h * h)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=2, max_size=2), st.lists(st.integers(0, 6), min_size=2, max_size=2))
def test_bra_ket_symmetry(grid7, a, b):
    A, B = BosonicConfig(tuple(a)), BosonicConfig(tuple(b))
    assert contact_matrix_element(grid7, A, B) == contact_matrix_element(grid7, B, A)


def test_contact_matrix_symmetric_with_parity_zeros(grid7):
    basis = bosonic_configs(2, 4)
    W = contact_matrix(grid7, basis)
    assert np.array_equal(W, W.T)
    for i, j in itertools.product(range(len(basis)), repeat=2):
        if (basis[i].index_sum + basis[j].index_sum) % 2:
            assert W[i, j] == 0.0


def test_admissible_factor_states_couple(grid16):
    for n in (2, 3):
        ground = BosonicConfig.ground(n)
        for c in bosonic_configs(n, grid16.M - 1):
            if c.index_sum % 2 == 0:
                assert abs(contact_matrix_element(grid16, ground, c)) > 1e-10


def test_level_beyond_grid(grid7):
    with pytest.raises(LevelOutOfRangeError):
        contact_matrix_element(grid7, BosonicConfig.ground(2), BosonicConfig.of(0, 8))


def test_overlap_raw(grid7):
    assert contact_overlap(grid7, (0, 0)) == pytest.approx(1.0, abs=1e-10)
    assert permutation_count([1, 2]) == 3
