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

import numpy as np
import scipy.fft

from frisr._base import GeometryError
from frisr._grid import FilterSupport, FilterCoefficients
from ._base import NullBasis, EdgeMask

_CHUNK = 32


def _pixel_phase(n: int, k: np.ndarray) -> np.ndarray:
    # pixel centers sit at (i + 0.5) / n
    return np.exp(1j * np.pi * k / n)


def render_filters(vectors: np.ndarray, support: FilterSupport, size: tuple, workers: int = 1) -> np.ndarray:
    """
    Evaluates mu_i on the pixel centers of an (Ny, Nx) grid for every row of ``vectors``.

    Coefficients are zero-padded onto the Nx x Ny spectral grid and inverse transformed.
    """
    nx, ny = size
    if nx < 2 * support.k1 + 1 or ny < 2 * support.l1 + 1:
        raise GeometryError(f"Render size {size} is too small for filter support {support}")
    kx = np.arange(-support.k1, support.k1 + 1)
    ky = np.arange(-support.l1, support.l1 + 1)
    phase = np.outer(_pixel_phase(ny, ky), _pixel_phase(nx, kx))
    coeffs = np.asarray(vectors, dtype=np.complex128).reshape(-1, *support.shape) * phase
    padded = np.zeros((coeffs.shape[0], ny, nx), dtype=np.complex128)
    padded[np.ix_(np.arange(coeffs.shape[0]), ky % ny, kx % nx)] = coeffs
    return scipy.fft.ifft2(padded, axes=(-2, -1), workers=workers) * (nx * ny)


def _sum_of_squares(vectors: np.ndarray, support: FilterSupport, size: tuple) -> np.ndarray:
    nx, ny = size
    total = np.zeros((ny, nx), dtype=np.float64)
    for start in range(0, vectors.shape[0], _CHUNK):
        mu = render_filters(vectors[start:start + _CHUNK], support, size)
        total += np.sum(np.abs(mu) ** 2, axis=0)
    return total


def render_mask(basis: NullBasis, size: tuple) -> EdgeMask:
    """
    Sum-of-squares average sqrt((1/P) sum |mu_i|^2) of the basis masks, divided by its maximum.

    The 1/P factor sits inside the root; after max-normalization the placement does not matter.
    """
    pixels = np.sqrt(_sum_of_squares(basis.vectors, basis.support, size) / basis.P)
    peak = pixels.max()
    if peak == 0:
        raise ValueError("Cannot render an all-zero null basis")
    return EdgeMask(pixels / peak, "nullavg", basis.delta, basis.support)


def render_single_mask(c: FilterCoefficients, size: tuple, method: str = "single") -> EdgeMask:
    """|mu| of one filter, divided by its maximum."""
    pixels = np.abs(render_filters(c.vector[np.newaxis], c.support, size)[0])
    peak = pixels.max()
    if peak == 0:
        raise ValueError("Cannot render all-zero filter coefficients")
    return EdgeMask(pixels / peak, method, None, c.support)
