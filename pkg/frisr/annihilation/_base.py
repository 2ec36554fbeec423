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

from dataclasses import dataclass

import numpy as np

from frisr._base import DerivativeKind
from frisr._grid import FilterSupport


@dataclass(frozen=True, eq=False)
class AnnihilationSystem:
    """
    Stacked block-Toeplitz matrices T = [T_1; ...; T_n] of valid 2-D convolutions.

    Rows are ordered derivative-kind major, then ky, then kx; columns follow the
    filter support in row-major order with kx fastest.
    """
    matrix: np.ndarray
    kx_max: int
    ky_max: int
    support: FilterSupport
    kinds: tuple = ()
    row_normalize: bool = False

    @property
    def n_valid_shifts(self) -> int:
        vy, vx = self.support.valid_shape(self.kx_max, self.ky_max)
        return vy * vx

    @property
    def n_blocks(self) -> int:
        return self.matrix.shape[0] // self.n_valid_shifts

    def block(self, j: int) -> np.ndarray:
        n = self.n_valid_shifts
        return self.matrix[j * n:(j + 1) * n]

    def provenance(self) -> dict:
        return {
            "kx": [-self.kx_max, self.kx_max],
            "ky": [-self.ky_max, self.ky_max],
            "k1": self.support.k1,
            "l1": self.support.l1,
            "kinds": [k.value if isinstance(k, DerivativeKind) else str(k) for k in self.kinds],
            "row_normalize": self.row_normalize,
            "shape": list(self.matrix.shape),
        }
