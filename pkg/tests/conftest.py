import numpy as np
import pytest

from fastlight import MediumSpec, ReducedLine


@pytest.fixture
def example_spec():
    """Textbook-scale medium in units of the one-photon linewidth Gamma.

    Far detuned (Delta = 100 Gamma), weak coupling (Omega_c = 0.2 Gamma),
    slow ground-state decoherence (gamma = 0.01 Gamma).  length = 0 keeps it
    a pure susceptibility model.
    """
    return MediumSpec(
        beta=1.0,
        gamma=0.01,
        Gamma=1.0,
        omega_c_rabi=0.2,
        Delta=100.0,
        length=0.0,
        omega0=1.0e5,
    )


@pytest.fixture
def demo_spec():
    """Warm-vapor numbers in SI: reduces to t0 = 0.280 us, T~ = 0.500."""
    return MediumSpec(
        beta=2200.0,
        gamma=1.2285e6,
        Gamma=2 * np.pi * 6e6,
        omega_c_rabi=2 * np.pi * 40e6,
        Delta=2 * np.pi * 900e6,
        length=0.1,
        omega0=2 * np.pi * 299792458 / 794.98e-9,
    )


@pytest.fixture
def quick_line():
    """The quick-start reduced line: 0.28 us advance, half transmission."""
    return ReducedLine(t0=0.28e-6, gamma_prime=-np.log(0.5) / (2 * 0.28e-6))
