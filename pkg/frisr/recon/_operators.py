#
# FRISR: Super-resolved MRI from edge annihilation
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
"""
Fourier undersampling operator and periodic gradient on the pixel-center grid.

Pixel (i, j) sits at ((i+0.5)/Nx, (j+0.5)/Ny), so the unitary DFT carries the
half-pixel phase exp(-j pi (kx/Nx + ky/Ny)); with that phase A x approximates the
continuous Fourier samples scaled by sqrt(Nx Ny).
"""

import math

import numpy as np
import scipy.fft

from frisr._base import GeometryError
from frisr._grid import KSpaceGrid


def _pixel_phase(size: tuple) -> np.ndarray:
    nx, ny = size
    kx = np.fft.fftfreq(nx, 1.0 / nx)
    ky = np.fft.fftfreq(ny, 1.0 / ny)
    return np.exp(-1j * np.pi * np.add.outer(ky / ny, kx / nx))


def fft2c(x: np.ndarray, workers: int = 1) -> np.ndarray:
    """Unitary DFT with the pixel-center phase, in unshifted frequency order."""
    ny, nx = x.shape
    return scipy.fft.fft2(x, norm='ortho', workers=workers) * _pixel_phase((nx, ny))


def ifft2c(X: np.ndarray, workers: int = 1) -> np.ndarray:
    ny, nx = X.shape
    return scipy.fft.ifft2(X * np.conj(_pixel_phase((nx, ny))), norm='ortho', workers=workers)


def check_window(kx_max: int, ky_max: int, size: tuple):
    nx, ny = size
    if kx_max > (nx - 1) // 2 or ky_max > (ny - 1) // 2:
        raise GeometryError(f"Window [-{kx_max},{kx_max}]x[-{ky_max},{ky_max}] does not fit the spectrum of a {nx}x{ny} image")


def window_index(kx_max: int, ky_max: int, size: tuple) -> tuple:
    check_window(kx_max, ky_max, size)
    nx, ny = size
    return np.ix_(np.arange(-ky_max, ky_max + 1) % ny, np.arange(-kx_max, kx_max + 1) % nx)


def forward_op(x: np.ndarray, kx_max: int, ky_max: int, workers: int = 1) -> KSpaceGrid:
    """A x: unitary DFT of the image restricted to the centered window."""
    ny, nx = x.shape
    ix = window_index(kx_max, ky_max, (nx, ny))
    return KSpaceGrid(kx_max, ky_max, fft2c(x, workers)[ix])


def adjoint_op(ksp: KSpaceGrid, size: tuple, workers: int = 1) -> np.ndarray:
    """A* y: zero-padded inverse transform of the window samples."""
    nx, ny = size
    ix = window_index(ksp.kx_max, ksp.ky_max, size)
    X = np.zeros((ny, nx), dtype=np.complex128)
    X[ix] = ksp.values
    return ifft2c(X, workers)


def scale_samples(ksp: KSpaceGrid, size: tuple) -> KSpaceGrid:
    """Converts continuous Fourier samples to the units of the unitary DFT on a grid of ``size``."""
    nx, ny = size
    return ksp.with_values(ksp.values * math.sqrt(nx * ny))


def gradient(x: np.ndarray) -> np.ndarray:
    """Forward differences with periodic boundary, stacked as (d/dx, d/dy)."""
    return np.stack((np.roll(x, -1, axis=1) - x, np.roll(x, -1, axis=0) - x))


def divergence(p: np.ndarray) -> np.ndarray:
    """Negative adjoint of ``gradient``."""
    return (p[0] - np.roll(p[0], 1, axis=1)) + (p[1] - np.roll(p[1], 1, axis=0))


def gradient_magnitude(x: np.ndarray) -> np.ndarray:
    g = gradient(x)
    return np.sqrt(np.abs(g[0]) ** 2 + np.abs(g[1]) ** 2)
