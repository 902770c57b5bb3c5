import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from logfactor import BosonicConfig, DomainError, Spectrum, average_probability, build_rabi_system, measure_at_pi_half, measure_random_time, shor_success_probability
from logfactor.dynamics import RabiSystem
from logfactor.measurement import branch_probabilities, measure_random_phase, sample_outcomes, write_jsonl

from oracles import FROZEN_PT_QUARTER, FROZEN_PT_SMALL, average_sin2


def test_average_probability_values():
    assert average_probability(0.0) == 0.0
    assert average_probability(math.pi / 2) == pytest.approx(0.5, abs=1e-15)
    assert average_probability(math.pi) == pytest.approx(0.5, abs=1e-15)
    assert average_probability(1e6) == pytest.approx(0.5, abs=1e-6)
    assert average_probability(math.pi / 4) == pytest.approx(0.5 - 1 / math.pi, abs=1e-14)


def test_average_probability_against_quadrature():
    assert average_probability(0.1) == pytest.approx(FROZEN_PT_SMALL, rel=1e-10)
    assert average_probability(0.1) == pytest.approx(0.1**2 / 3, rel=1e-2)
    assert average_probability(math.pi / 4) == pytest.approx(FROZEN_PT_QUARTER, rel=1e-10)


@given(st.floats(1e-3, 200))
def test_average_probability_matches_quadrature(x):
    assert average_probability(x) == pytest.approx(average_sin2(x), rel=1e-7, abs=1e-12)


def test_average_probability_vectorised():
    x = np.array([0.0, 1.0, 2.0])
    assert np.allclose(average_probability(x), [0.0, average_sin2(1.0), average_sin2(2.0)])
    with pytest.raises(DomainError):
        average_probability(-1.0)


def test_shor_probability():
    assert shor_success_probability(1) == 0.0
    assert shor_success_probability(2) == 0.5
    assert shor_success_probability(4) == 7 / 8


def test_random_time_outcome_is_consistent(grid16):
    s = build_rabi_system(grid16, 35, 2)
    T = 50 / s.Omega
    outs = [measure_random_time(s, T, seed) for seed in range(200)]
    hits = [o for o in outs if o.is_factor_state]
    assert 0 < len(hits) < 200
    assert all(math.prod(o.factors) == 35 for o in hits)
    assert all(0 <= o.time <= T for o in outs)
    assert measure_random_time(s, T, 5) == measure_random_time(s, T, 5)


def test_random_time_needs_positive_window(grid16):
    with pytest.raises(DomainError):
        measure_random_time(build_rabi_system(grid16, 35, 2), 0.0, 1)


def test_pi_half_gives_factors(grid16):
    s = build_rabi_system(grid16, 35, 2)
    out = measure_at_pi_half(s, 0)
    assert out.factors == (5, 7)
    assert branch_probabilities(s, math.pi / 2)[1] == pytest.approx(1.0)
    # a full period brings it back to the ground state
    full = measure_at_pi_half(s, 0, time=math.pi / s.Omega)
    assert not full.is_factor_state


def test_pi_half_refuses_degenerate(grid16):
    with pytest.raises(DomainError):
        measure_at_pi_half(build_rabi_system(grid16, 385, 2))


def test_conditional_factor_frequencies(grid16):
    s = build_rabi_system(grid16, 385, 2)
    _, idx = sample_outcomes(s, 50.0, 200_000, 11)
    hits = idx[idx > 0]
    freq = np.bincount(hits - 1, minlength=s.d) / len(hits)
    expect = s.branch_weights**2
    sigma = np.sqrt(expect * (1 - expect) / len(hits))
    assert np.all(np.abs(freq - expect) < 4 * sigma)


def test_monte_carlo_matches_average_probability():
    toy = RabiSystem(Spectrum.log_integer(3), 35, 2, 1.0, (BosonicConfig.of(2, 4),), (1.0,), 2.0)
    for x in (0.3, 1.0, 7.0):
        _, idx = sample_outcomes(toy, x, 50_000, 4)
        p, ref = np.mean(idx > 0), average_probability(x)
        assert abs(p - ref) < 4 * math.sqrt(ref * (1 - ref) / 50_000)


def test_jsonl_records(tmp_path, grid16):
    s = build_rabi_system(grid16, 35, 2)
    outs = [measure_random_phase(s, 50.0, seed) for seed in range(5)]
    path = write_jsonl(outs, tmp_path / "runs.jsonl")
    rows = [json.loads(line) for line in path.read_text().splitlines()]
    assert [r["seed"] for r in rows] == list(range(5))
    assert set(rows[0]) == {"seed", "t_m", "outcome", "factors"}
