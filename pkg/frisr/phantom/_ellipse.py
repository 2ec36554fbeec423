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

import json
import math
import os

import numpy as np
import scipy.ndimage as ndimage

from frisr._grid import KSpaceGrid
from ._base import Ellipse, PhantomSpec

# Shepp & Logan head phantom on [-1,1]^2 as in Kak & Slaney, table 3.1:
# x, y, semi-axis along x, semi-axis along y, rotation (degrees), intensity
_SHEPP_LOGAN = [
    (0.0, 0.0, 0.69, 0.92, 0.0, 2.0),
    (0.0, -0.0184, 0.6624, 0.874, 0.0, -0.98),
    (0.22, 0.0, 0.11, 0.31, -18.0, -0.02),
    (-0.22, 0.0, 0.16, 0.41, 18.0, -0.02),
    (0.0, 0.35, 0.21, 0.25, 0.0, 0.01),
    (0.0, 0.1, 0.046, 0.046, 0.0, 0.01),
    (0.0, -0.1, 0.046, 0.046, 0.0, 0.01),
    (-0.08, -0.605, 0.046, 0.023, 0.0, 0.01),
    (0.0, -0.605, 0.023, 0.023, 0.0, 0.01),
    (0.06, -0.605, 0.023, 0.046, 0.0, 0.01),
]


def shepp_logan_spec() -> PhantomSpec:
    """
    The 10-ellipse Shepp-Logan phantom mapped to the unit square.

    The table's y axis points up; FOV rows run downwards, so y is flipped and the
    rotation sense with it.
    """
    ellipses = [
        Ellipse(
            center=((x + 1) / 2, (1 - y) / 2),
            semi_axes=(a / 2, b / 2),
            angle=-math.radians(deg),
            amplitude=amp,
        )
        for x, y, a, b, deg, amp in _SHEPP_LOGAN
    ]
    return PhantomSpec(tuple(ellipses), "shepp-logan")


BUILTIN_PHANTOMS = {
    "shepp-logan": shepp_logan_spec,
}


def load_phantom(name_or_path: str) -> PhantomSpec:
    """Returns a builtin phantom by name or reads a PhantomSpec JSON file."""
    if name_or_path in BUILTIN_PHANTOMS:
        return BUILTIN_PHANTOMS[name_or_path]()
    if not os.path.isfile(name_or_path):
        raise ValueError(f"Unknown phantom {name_or_path!r}: not a builtin ({', '.join(BUILTIN_PHANTOMS)}) and not a file")
    with open(name_or_path, 'r', encoding='utf-8') as f:
        return PhantomSpec.from_dict(json.load(f))


def save_phantom(spec: PhantomSpec, path: str):
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(spec.to_dict(), f, indent=2)


def ellipse_kspace(spec: PhantomSpec, kx_max: int, ky_max: int) -> KSpaceGrid:
    """Exact Fourier samples of the phantom on the centered integer window."""
    grid = KSpaceGrid.zeros(kx_max, ky_max)
    kx, ky = grid.frequencies()
    values = np.zeros(grid.shape, dtype=np.complex128)
    for el in spec.ellipses:
        values += el.kspace(kx, ky)
    return grid.with_values(values)


def rasterize(spec: PhantomSpec, size: tuple, supersample: int = 1) -> np.ndarray:
    """
    Pixel averages of the phantom on an (Ny, Nx) grid.

    Pixel (i, j) is centered at ((i+0.5)/Nx, (j+0.5)/Ny); each pixel averages
    supersample^2 evenly spaced sub-samples.
    """
    nx, ny = size
    if nx < 8 or ny < 8:
        raise ValueError(f"Rasterization needs at least 8 pixels per axis, got {size}")
    if supersample < 1:
        raise ValueError(f"supersample must be >= 1, got {supersample}")
    image = np.zeros((ny, nx), dtype=np.float64)
    offsets = (np.arange(supersample) + 0.5) / supersample
    for oy in offsets:
        y = (np.arange(ny) + oy) / ny
        for ox in offsets:
            x = (np.arange(nx) + ox) / nx
            xx, yy = np.meshgrid(x, y)
            for el in spec.ellipses:
                image[el.contains(xx, yy)] += el.amplitude
    return image / supersample ** 2


def edge_map(spec: PhantomSpec, size: tuple, dilate: int = 1) -> np.ndarray:
    """Boolean pixels where the rasterized phantom changes value, dilated by ``dilate`` pixels."""
    image = rasterize(spec, size, 1)
    edges = np.zeros(image.shape, dtype=bool)
    dx = image[:, 1:] != image[:, :-1]
    dy = image[1:, :] != image[:-1, :]
    edges[:, 1:] |= dx
    edges[:, :-1] |= dx
    edges[1:, :] |= dy
    edges[:-1, :] |= dy
    if dilate > 0:
        edges = ndimage.binary_dilation(edges, iterations=dilate)
    return edges
