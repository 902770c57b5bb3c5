import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from logfactor import DomainError, PrimeTableError, Spectrum, decompose_energy, total_energy
from logfactor.spectra import PrimeTable, energy, levels_energy_argument, total_energy_argument

from oracles import factorizations_brute


def test_log_integer_ground_is_zero():
    assert energy(Spectrum.log_integer(3), 0) == 0.0


def test_log_integer_level_two_matches_high_precision():
    mpmath.mp.dps = 30
    assert energy(Spectrum.log_integer(3), 2) == pytest.approx(float(mpmath.log(mpmath.mpf(5) / 3)), abs=1e-15)


def test_prime_levels():
    sp = Spectrum.prime()
    assert sp.energy(0) == 0.0
    assert sp.energy(1) == pytest.approx(math.log(2))
    assert [sp.decode(i) for i in range(1, 7)] == [2, 3, 5, 7, 11, 13]


@pytest.mark.parametrize("L", [1, 2, 4, 0, -3])
def test_rejects_bad_scaling_parameter(L):
    with pytest.raises(DomainError):
        Spectrum.log_integer(L)


def test_prime_table_reports_missing_index():
    table = PrimeTable(size=10)
    with pytest.raises(PrimeTableError) as err:
        table[50]
    assert err.value.category == "extend-table"
    assert table.get(50) == 229  # 50th prime, growing on demand


@given(st.integers(3, 15).filter(lambda L: L % 2), st.integers(0, 500))
def test_log_integer_energies_increase(L, ell):
    sp = Spectrum.log_integer(L)
    assert sp.energy(ell + 1) > sp.energy(ell)
    assert sp.encode(sp.decode(ell)) == ell


@given(st.integers(0, 300))
def test_prime_energies_increase(ell):
    sp = Spectrum.prime()
    assert sp.energy(ell + 1) > sp.energy(ell)


def test_decompose_examples():
    sp = Spectrum.log_integer(3)
    assert decompose_energy(sp, 35, 2) == [(2, 4)]
    assert decompose_energy(sp, 37, 2) == []
    assert sorted(decompose_energy(sp, 245, 2)) == [(2, 46), (4, 32)]


def test_decompose_rejects_small_factors():
    with pytest.raises(DomainError):
        decompose_energy(Spectrum.log_integer(3), 3 * 35, 2)


@given(st.integers(5, 3000).filter(lambda n: n % 2 and n % 3), st.integers(1, 4))
def test_decompose_matches_brute_force(N, k):
    sp = Spectrum.log_integer(3)
    got = {tuple(q + 3 for q in lv) for lv in decompose_energy(sp, N, k)}
    assert got == factorizations_brute(N, k, lo=4)


@given(st.integers(5, 5000).filter(lambda n: n % 2 and n % 3), st.integers(1, 4))
def test_decomposed_levels_sum_to_target_exactly(N, k):
    sp = Spectrum.log_integer(3)
    for lv in decompose_energy(sp, N, k):
        assert levels_energy_argument(sp, lv) == total_energy_argument(sp, N, k)


def test_total_energy_domain():
    sp = Spectrum.log_integer(3)
    assert total_energy(sp, 35, 2) == pytest.approx(math.log(35 / 9))
    assert total_energy_argument(sp, 35, 3) == Fraction(35, 27)
    with pytest.raises(DomainError):
        total_energy(sp, 25, 3)


def test_prime_mode_pads_with_ground_levels():
    sp = Spectrum.prime()
    assert decompose_energy(sp, 70, 6) == [(0, 0, 0, 1, 3, 4)]
    assert decompose_energy(sp, 8, 4) == [(0, 1, 1, 1)]
    assert decompose_energy(sp, 16, 3) == []
    assert np.allclose(sp.energies(4), np.log([1, 2, 3, 5]))
