import numpy as np
import pytest

from logfactor import BuildConfig, ConvergenceError, DomainError, GridTooSmallError, LevelOutOfRangeError, Spectrum, build_potential
from logfactor.numerov import numerov_level, numerov_spectrum
from logfactor.potential import count_nodes, make_grid, solve_eigenproblem


def test_harmonic_oscillator_spectrum():
    xi = make_grid(12.0, 0.005)
    E, phi = solve_eigenproblem(xi, 0.5 * xi**2, 4)
    assert np.allclose(E, [0.5, 1.5, 2.5, 3.5], atol=1e-5)
    assert phi.shape == (4, xi.size)


def test_harmonic_fine_grid_meets_1e6():
    # the three-point error is about E h^2 / 12 per level, so 1e-6 needs h = 1e-3
    xi = make_grid(10.0, 0.001)
    E, _ = solve_eigenproblem(xi, 0.5 * xi**2, 4)
    assert np.abs(E - [0.5, 1.5, 2.5, 3.5]).max() < 1e-6


def test_grid_too_small_suggests_extent():
    xi = make_grid(3.0, 0.01)
    with pytest.raises(GridTooSmallError) as err:
        solve_eigenproblem(xi, 0.5 * xi**2, 4)
    assert err.value.suggested_extent > 3.0


def test_log_integer_reconstruction(grid7):
    assert grid7.residual() < 1e-3
    assert grid7.eigenvalues[2] == pytest.approx(np.log(5 / 3), abs=1e-3)
    assert grid7.eigenvalues[0] == pytest.approx(0.0, abs=1e-10)


def test_numerov_oracle_agrees(grid7):
    num = numerov_spectrum(grid7.xi, grid7.v, grid7.M)
    assert np.abs(num - grid7.eigenvalues).max() < 1e-5


def test_numerov_on_harmonic_oscillator():
    xi = make_grid(10.0, 0.005)
    assert numerov_level(xi, 0.5 * xi**2, 3) == pytest.approx(3.5, abs=1e-8)


def test_potential_is_even(grid16):
    assert np.allclose(grid16.v, grid16.v[::-1], atol=1e-12)


def test_parity_and_nodes(grid16):
    for ell in range(grid16.M):
        phi = grid16.phi(ell)
        assert np.allclose(phi[::-1], (-1) ** ell * phi, atol=1e-9)
        assert count_nodes(phi) == ell
    assert np.allclose(grid16.phi(3)[::-1], -grid16.phi(3))


def test_orthonormal(grid16):
    gram = grid16.eigenfunctions @ grid16.eigenfunctions.T * grid16.h
    assert np.abs(gram - np.eye(grid16.M)).max() < 1e-8


def test_arrays_are_read_only(grid7):
    with pytest.raises(ValueError):
        grid7.v[0] = 1.0


def test_level_out_of_range(grid7):
    with pytest.raises(LevelOutOfRangeError):
        grid7.phi(grid7.M)


def test_harmonic_target_is_a_fixed_point():
    cfg = BuildConfig(xi_max=25.0, initial="harmonic", omega_eff=1.0, target_residual=1e-3)
    grid = build_potential(np.arange(6) + 0.5, config=cfg)
    assert grid.iterations == 0


def test_non_convergence_carries_history():
    cfg = BuildConfig(max_iter=1, tol=1e-9, target_residual=1e-12)
    with pytest.raises(ConvergenceError) as err:
        build_potential(Spectrum.log_integer(3), M=7, config=cfg)
    assert len(err.value.history) == 2


def test_rejects_non_increasing_target():
    with pytest.raises(DomainError):
        build_potential([0.0, 0.5, 0.5])


def test_diagonal_update_also_converges_for_few_levels():
    grid = build_potential(Spectrum.log_integer(3), M=4, config=BuildConfig(update="diagonal"))
    assert grid.residual() < 1e-3


def test_csv_exports(tmp_path, grid7):
    p = grid7.write_potential_csv(tmp_path / "v.csv")
    e = grid7.write_eigen_csv(tmp_path / "phi.csv")
    assert p.read_text().splitlines()[0] == "xi,v"
    assert e.read_text().splitlines()[0] == "xi," + ",".join(f"phi{i}" for i in range(7))
    data = np.loadtxt(p, delimiter=",", skiprows=1)
    assert np.allclose(data[:, 1], grid7.v, atol=1e-9)
