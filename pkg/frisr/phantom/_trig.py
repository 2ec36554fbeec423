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

import logging

import numpy as np
import scipy.fft

from frisr._grid import KSpaceGrid
from ._base import TrigRegionPhantom

logger = logging.getLogger(__name__)

MAX_ZERO_SET_FRACTION = 1e-3


def trig_region_kspace(ph: TrigRegionPhantom, kx_max: int, ky_max: int, oversample: int = 2048) -> KSpaceGrid:
    """
    Fourier-series coefficients of a trigonometric-region phantom on a centered window.

    The indicator is sampled on an oversample x oversample grid at r = (i, j) / oversample
    and transformed with a DFT. The jump across the curve limits this oracle to O(1/oversample)
    accuracy, so it is meant for convergence studies rather than exact equalities.
    """
    need = 4 * (2 * max(kx_max, ky_max) + 1)
    if oversample < need:
        raise ValueError(f"oversample must be at least 4x the window bandwidth ({need}), got {oversample}")
    fraction = ph.zero_set_fraction(oversample)
    if fraction > MAX_ZERO_SET_FRACTION:
        raise ValueError(f"The zero set of mu covers {fraction:.2%} of the grid; it must have measure zero")
    image = ph.image_on_grid(oversample)
    spectrum = scipy.fft.fft2(image) / oversample ** 2
    ky = np.arange(-ky_max, ky_max + 1) % oversample
    kx = np.arange(-kx_max, kx_max + 1) % oversample
    logger.debug(f"Computed {ph.name} samples on a {oversample}^2 grid")
    return KSpaceGrid(kx_max, ky_max, spectrum[np.ix_(ky, kx)])
