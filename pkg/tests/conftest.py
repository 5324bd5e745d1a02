import numpy as np
import pytest

from kuramoto_spectral import (
    SearchWindow,
    bimodal_linear_density,
    find_roots,
    gaussian,
    lorentzian,
    multiband_density,
    two_step_density,
)

K_C_GAUSS = 2 * np.sqrt(2 / np.pi)
LAM0_GAUSS_K1 = -0.5179127159921796  # real resonance pole at K = 1, from F(lam) = 2


@pytest.fixture(scope="session")
def gauss():
    return gaussian()


@pytest.fixture(scope="session")
def lorentz():
    return lorentzian()


@pytest.fixture(scope="session")
def two_step():
    return two_step_density()


@pytest.fixture(scope="session")
def bimodal():
    return bimodal_linear_density()


@pytest.fixture(scope="session")
def multiband():
    return multiband_density()


@pytest.fixture(scope="session")
def gauss_roots_K1(gauss):
    """Resonance poles of the standard normal at K = 1, depth 8 window."""
    window = SearchWindow(-8.0, 0.05, -10.0, 10.0, grid_resolution=161)
    return find_roots(gauss, 1.0, window)
