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

from typing import Sequence
import logging

import numpy as np
import scipy.signal
from numpy.lib.stride_tricks import sliding_window_view

from frisr._base import DerivativeKind, GeometryError
from frisr._grid import KSpaceGrid, FilterSupport, FilterCoefficients
from ._base import AnnihilationSystem

logger = logging.getLogger(__name__)


def derivative_weight(ksp: KSpaceGrid, kind: DerivativeKind) -> KSpaceGrid:
    """Multiplies the samples by the transfer function of a derivative at omega = 2 pi k; ``none`` keeps them."""
    kind = DerivativeKind(kind)
    kx, ky = ksp.frequencies()
    wx = 2 * np.pi * kx
    wy = 2 * np.pi * ky
    if kind == DerivativeKind.NONE:
        return ksp
    if kind == DerivativeKind.DX:
        factor = -1j * wx
    elif kind == DerivativeKind.DY:
        factor = -1j * wy
    elif kind == DerivativeKind.DXX:
        factor = -wx ** 2
    elif kind == DerivativeKind.DYY:
        factor = -wy ** 2
    elif kind == DerivativeKind.DXY:
        factor = -wx * wy
    elif kind == DerivativeKind.LAPLACIAN:
        factor = -(wx ** 2 + wy ** 2)
    else:
        raise ValueError(f"Unknown derivative kind: {kind}")
    return ksp.with_values(ksp.values * factor)


def check_geometry(kx_max: int, ky_max: int, support: FilterSupport):
    if support.size < 2:
        raise GeometryError("The filter support needs at least two coefficients")
    if support.k1 > kx_max or support.l1 > ky_max:
        raise GeometryError(
            f"Filter support [-{support.k1},{support.k1}]x[-{support.l1},{support.l1}] does not fit the "
            f"[-{kx_max},{kx_max}]x[-{ky_max},{ky_max}] window: the valid region is empty")


def convolution_indices(kx_max: int, ky_max: int, support: FilterSupport) -> np.ndarray:
    """
    Flat sample indices of the block-Toeplitz matrix for one grid.

    Entry (row, col) is the index into ``values.ravel()`` of d[k - l] for the valid
    output shift k of the row and the filter index l of the column.
    """
    check_geometry(kx_max, ky_max, support)
    flat = np.arange((2 * ky_max + 1) * (2 * kx_max + 1)).reshape(2 * ky_max + 1, 2 * kx_max + 1)
    patches = sliding_window_view(flat, support.shape)
    return patches[:, :, ::-1, ::-1].reshape(-1, support.size)


def toeplitz_block(ksp: KSpaceGrid, support: FilterSupport) -> np.ndarray:
    return ksp.values.ravel()[convolution_indices(ksp.kx_max, ksp.ky_max, support)]


def build_system(weighted: Sequence[KSpaceGrid], support: FilterSupport, kinds: Sequence = (), row_normalize: bool = False) -> AnnihilationSystem:
    """
    Stacks the valid-region convolution matrices of the weighted grids.

    ``kinds`` only documents which derivative produced each grid. With ``row_normalize``
    every nonzero row is scaled to unit norm.
    """
    weighted = list(weighted)
    if not weighted:
        raise ValueError("build_system needs at least one weighted grid")
    first = weighted[0]
    for grid in weighted[1:]:
        if not grid.same_extent(first):
            raise ValueError("All weighted grids must share the same window")
    idx = convolution_indices(first.kx_max, first.ky_max, support)
    matrix = np.vstack([grid.values.ravel()[idx] for grid in weighted])
    if row_normalize:
        norms = np.linalg.norm(matrix, axis=1, keepdims=True)
        matrix = matrix / np.where(norms > 0, norms, 1.0)
    logger.debug(f"Annihilation system of shape {matrix.shape} for support {support}")
    return AnnihilationSystem(matrix, first.kx_max, first.ky_max, support, tuple(kinds), row_normalize)


def weighted_system(ksp: KSpaceGrid, support: FilterSupport, kinds: Sequence = (DerivativeKind.DX, DerivativeKind.DY), row_normalize: bool = False) -> AnnihilationSystem:
    """Derivative-weights the samples with each kind and builds the stacked system."""
    kinds = tuple(DerivativeKind(k) for k in kinds)
    return build_system([derivative_weight(ksp, k) for k in kinds], support, kinds, row_normalize)


def annihilation_residual(sys: AnnihilationSystem, c: FilterCoefficients) -> float:
    """||T c|| / (||T||_F ||c||); zero means exact annihilation."""
    if c.support != sys.support:
        raise ValueError(f"Coefficient support {c.support} does not match the system support {sys.support}")
    c_norm = np.linalg.norm(c.vector)
    if c_norm == 0:
        raise ValueError("The coefficient vector is zero")
    t_norm = np.linalg.norm(sys.matrix)
    if t_norm == 0:
        return 0.0
    return float(np.linalg.norm(sys.matrix @ c.vector) / (t_norm * c_norm))


def block_residuals(sys: AnnihilationSystem, c: FilterCoefficients) -> list:
    """Per-block ||T_j c|| / (||T_j||_F ||c||), one value per derivative kind and grid."""
    if c.support != sys.support:
        raise ValueError(f"Coefficient support {c.support} does not match the system support {sys.support}")
    c_norm = np.linalg.norm(c.vector)
    if c_norm == 0:
        raise ValueError("The coefficient vector is zero")
    out = []
    for j in range(sys.n_blocks):
        block = sys.block(j)
        t_norm = np.linalg.norm(block)
        out.append(float(np.linalg.norm(block @ c.vector) / (t_norm * c_norm)) if t_norm > 0 else 0.0)
    return out


def square_coeffs(mu: FilterCoefficients) -> FilterCoefficients:
    """Coefficients of mu^2: the 2-D self-convolution on the doubled support."""
    return FilterCoefficients(mu.support.doubled(), scipy.signal.convolve2d(mu.coeffs, mu.coeffs, mode='full'))
