"""Integer factorization with bosons in a potential with a logarithmic spectrum."""

__version__ = "0.1.0"

from .bosonic import BosonicConfig, contact_matrix, contact_matrix_element
from .degeneracy import FactorizationSet, enumerate_factorizations, partition_count_diff, stirling_count
from .dynamics import AmplitudeTrajectory, RabiSystem, build_rabi_system, integrate_full, rwa_amplitudes
from .errors import (
    ConvergenceError,
    DomainError,
    GridTooSmallError,
    IntegrationError,
    LevelOutOfRangeError,
    LogFactorError,
    PrimeTableError,
)
from .measurement import (
    MeasurementOutcome,
    average_probability,
    measure_at_pi_half,
    measure_random_time,
    shor_success_probability,
)
from .potential import BuildConfig, PotentialGrid, build_potential
from .protocol import ProtocolRun, Verdict, run_iterative, run_known_n, run_prime_spectrum
from .spectra import Mode, Spectrum, decompose_energy, total_energy

__all__ = [
    "AmplitudeTrajectory", "BosonicConfig", "BuildConfig", "ConvergenceError", "DomainError",
    "FactorizationSet", "GridTooSmallError", "IntegrationError", "LevelOutOfRangeError", "LogFactorError",
    "MeasurementOutcome", "Mode", "PotentialGrid", "PrimeTableError", "ProtocolRun", "RabiSystem",
    "Spectrum", "Verdict", "average_probability", "build_potential", "build_rabi_system",
    "contact_matrix", "contact_matrix_element", "decompose_energy", "enumerate_factorizations",
    "integrate_full", "measure_at_pi_half", "measure_random_time", "partition_count_diff",
    "rwa_amplitudes", "run_iterative", "run_known_n", "run_prime_spectrum", "shor_success_probability",
    "stirling_count", "total_energy",
]
