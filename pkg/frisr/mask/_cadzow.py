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
from typing import Sequence
import logging

import numpy as np
import scipy.linalg
from tqdm import tqdm

from frisr._base import MaskMethod
from frisr._grid import KSpaceGrid, FilterSupport
from frisr.annihilation import convolution_indices
from ._ls import LeastSquaresEstimator

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CadzowResult:
    grids: list
    history: list

    @property
    def objective(self) -> float:
        return self.history[-1]


def derank(T: np.ndarray, r: int) -> tuple:
    """Best rank-r approximation of T and the Frobenius distance to it."""
    u, s, vh = scipy.linalg.svd(T, full_matrices=False)
    return (u[:, :r] * s[:r]) @ vh[:r], float(np.sqrt(np.sum(s[r:] ** 2)))


def average_back(T: np.ndarray, idx: np.ndarray, n: int) -> np.ndarray:
    """Projects a matrix onto the block-Toeplitz structure by averaging entries sharing a sample."""
    flat = idx.ravel()
    count = np.bincount(flat, minlength=n)
    values = np.bincount(flat, weights=np.real(T).ravel(), minlength=n)
    values = values + 1j * np.bincount(flat, weights=np.imag(T).ravel(), minlength=n)
    return values / count


def cadzow_denoise(ksp_weighted: Sequence[KSpaceGrid], support: FilterSupport, rank: int, iters: int, progress: bool = False) -> CadzowResult:
    """
    Alternates rank-r truncation of each block-Toeplitz matrix with re-imposing its structure.

    ``history`` holds the total distance of the structured matrices to the rank-r set before
    the first round and after every round; it does not increase.
    """
    if iters < 1:
        raise ValueError(f"Cadzow needs iters >= 1, got {iters}")
    if not 1 <= rank < support.size:
        raise ValueError(f"Cadzow rank must satisfy 1 <= rank < |support| = {support.size}, got {rank}")
    grids = list(ksp_weighted)
    idx = convolution_indices(grids[0].kx_max, grids[0].ky_max, support)
    current = [grid.values.ravel().copy() for grid in grids]
    history = []
    for _ in tqdm(range(iters), desc="Cadzow", unit="iter", disable=not progress):
        distance = 0.0
        for j, values in enumerate(current):
            low_rank, dist = derank(values[idx], rank)
            distance += dist ** 2
            current[j] = average_back(low_rank, idx, values.size)
        history.append(float(np.sqrt(distance)))
    history.append(float(np.sqrt(sum(derank(values[idx], rank)[1] ** 2 for values in current))))
    logger.info(f"Cadzow distance to rank {rank}: {history[0]:.3e} -> {history[-1]:.3e} in {iters} rounds")
    return CadzowResult([grid.with_values(values) for grid, values in zip(grids, current)], history)


class CadzowEstimator(LeastSquaresEstimator):
    method = MaskMethod.CADZOW

    def preprocess(self, grids: list, support: FilterSupport, diagnostics: dict) -> list:
        rank = self.params.resolved_rank(support)
        result = cadzow_denoise(grids, support, rank, self.params.cadzow_iters)
        diagnostics.update({"cadzow_rank": rank, "cadzow_history": result.history})
        return result.grids
