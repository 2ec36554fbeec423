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

from typing import Optional
import logging
import math

import numpy as np
import scipy.linalg

from frisr._base import MaskMethod
from frisr.annihilation import AnnihilationSystem
from ._base import MaskEstimator, MaskEstimate, NullBasis
from ._render import render_mask

logger = logging.getLogger(__name__)


def null_basis(sys: AnnihilationSystem, delta: Optional[float] = None, tail: Optional[float] = None) -> NullBasis:
    """
    Right singular vectors of T whose singular values are at most tau.

    With ``delta`` the threshold is tau = delta * sigma_1. Without it tau sits on the noise
    floor, tau = (1 + tail) * sigma_min, and the stored delta is tau / sigma_1. When no value
    qualifies the single vector of the smallest singular value is returned and ``fallback``
    is set.
    """
    if sys.matrix.size == 0:
        raise ValueError("Cannot compute the null space of an empty system")
    if delta is None and tail is None:
        raise ValueError("null_basis needs either delta or tail")
    if delta is not None and not 0 < delta <= 1:
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    if delta is None and not 0 <= tail < math.inf:
        raise ValueError(f"tail must be finite and nonnegative, got {tail}")
    rows, n = sys.matrix.shape
    _, s, vh = scipy.linalg.svd(sys.matrix, full_matrices=rows < n)
    sv = np.zeros(n)
    sv[:s.size] = s
    if delta is None:
        tau = (1 + tail) * sv[-1]
        delta = min(tau / sv[0], 1.0) if sv[0] > 0 else 1.0
    else:
        tau = delta * sv[0]
    selected = np.flatnonzero(sv <= tau)
    fallback = selected.size == 0
    if fallback:
        logger.warning(f"No singular value below delta={delta:g} * sigma_1; using the smallest one only")
        selected = np.array([n - 1])
    logger.info(f"Null basis of dimension {selected.size} from {n} singular values (tau={tau:.3e}, delta={delta:g})")
    return NullBasis(sys.support, np.conj(vh[selected]), sv, float(delta), fallback)


class NullSpaceEstimator(MaskEstimator):
    method = MaskMethod.NULLAVG

    def solve(self, system: AnnihilationSystem, diagnostics: dict) -> MaskEstimate:
        basis = null_basis(system, self.params.resolved_delta(), self.params.tail)
        diagnostics.update({"P": basis.P, "fallback": basis.fallback})
        t_norm = np.linalg.norm(system.matrix)
        # basis vectors have unit norm
        residual = float(np.linalg.norm(system.matrix @ basis.vectors.T, axis=0).max() / t_norm) if t_norm > 0 else 0.0
        return MaskEstimate(render_mask(basis, self.params.size), system, basis=basis, residual=residual, diagnostics=diagnostics)
