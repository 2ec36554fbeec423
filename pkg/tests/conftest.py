import numpy as np
import pytest

from frisr import FilterCoefficients, FilterSupport, KSpaceGrid
from frisr.phantom import TrigRegionPhantom


def cross_mu() -> FilterCoefficients:
    """mu = -cos(2 pi x) - cos(2 pi y) - 0.5, positive on a region centered at (0.5, 0.5)."""
    return FilterCoefficients.from_dict({
        (0, 0): -0.5,
        (1, 0): -0.5, (-1, 0): -0.5,
        (0, 1): -0.5, (0, -1): -0.5,
    })


def wide_mu() -> FilterCoefficients:
    """cross_mu plus 0.2 cos(4 pi x), on a 5x5 support."""
    terms = {(0, 0): -0.5, (1, 0): -0.5, (-1, 0): -0.5, (0, 1): -0.5, (0, -1): -0.5, (2, 0): 0.1, (-2, 0): 0.1}
    return FilterCoefficients.from_dict(terms, FilterSupport(2, 2))


def curve_points(n: int) -> tuple:
    """n points on the zero set of cross_mu."""
    x = np.linspace(1 / 6 + 1e-3, 5 / 6 - 1e-3, n // 2)
    y = np.arccos(np.clip(-0.5 - np.cos(2 * np.pi * x), -1, 1)) / (2 * np.pi)
    return np.concatenate([x, x]), np.concatenate([y, 1 - y])


def curve_dirac_grid(kx_max: int, ky_max: int, n_points: int = 240, seed: int = 0) -> KSpaceGrid:
    """Spectrum of random point masses on the zero set of cross_mu; annihilated exactly by it."""
    rng = np.random.default_rng(seed)
    x, y = curve_points(n_points)
    amps = rng.standard_normal(x.size) + 1j * rng.standard_normal(x.size)
    grid = KSpaceGrid.zeros(kx_max, ky_max)
    kx, ky = grid.frequencies()
    phases = np.exp(-2j * np.pi * (np.multiply.outer(kx, x) + np.multiply.outer(ky, y)))
    return grid.with_values(phases @ amps)


@pytest.fixture
def cross_phantom():
    return TrigRegionPhantom(cross_mu(), name="cross")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
