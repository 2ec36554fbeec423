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
import logging

import numpy as np
import scipy.linalg

from frisr._base import MaskMethod
from frisr._grid import FilterCoefficients
from frisr.annihilation import AnnihilationSystem, annihilation_residual, block_residuals
from ._base import MaskEstimator, MaskEstimate
from ._render import render_single_mask

logger = logging.getLogger(__name__)

# relative singular-value cutoff of the reduced system
RCOND = 1e-10


@dataclass(frozen=True, eq=False)
class LeastSquaresFit:
    coeffs: FilterCoefficients
    unique: bool
    rank: int


def estimate_ls(sys: AnnihilationSystem, rcond: float = RCOND) -> LeastSquaresFit:
    """
    Minimizes ||T c|| subject to c[0, 0] = 1.

    The constrained column moves to the right-hand side and the reduced problem is solved
    by an SVD-based least squares. Singular values below ``rcond`` times the largest one
    count as zero; a rank-deficient reduced matrix yields the minimum-norm solution with
    ``unique`` unset.
    """
    support = sys.support
    if sys.matrix.shape[0] < support.size - 1:
        raise ValueError(f"The system has {sys.matrix.shape[0]} rows, fewer than |support| - 1 = {support.size - 1}")
    if not 0 <= rcond < 1:
        raise ValueError(f"rcond must lie in [0, 1), got {rcond}")
    center = support.center_index
    rhs = -sys.matrix[:, center]
    reduced = np.delete(sys.matrix, center, axis=1)
    solution, _, rank, _ = scipy.linalg.lstsq(reduced, rhs, cond=rcond, lapack_driver='gelsd')
    unique = rank == reduced.shape[1]
    if not unique:
        logger.warning(f"Least-squares filter is not unique (rank {rank} < {reduced.shape[1]} at rcond={rcond:g}); returning the minimum-norm solution")
    return LeastSquaresFit(FilterCoefficients.from_vector(support, np.insert(solution, center, 1.0)), bool(unique), int(rank))


class LeastSquaresEstimator(MaskEstimator):
    method = MaskMethod.LS

    def solve(self, system: AnnihilationSystem, diagnostics: dict) -> MaskEstimate:
        fit = estimate_ls(system)
        diagnostics.update({"unique": fit.unique, "rank": fit.rank, "block_residuals": block_residuals(system, fit.coeffs)})
        mask = render_single_mask(fit.coeffs, self.params.size, self.method.value)
        return MaskEstimate(mask, system, coeffs=fit.coeffs, residual=annihilation_residual(system, fit.coeffs), diagnostics=diagnostics)
