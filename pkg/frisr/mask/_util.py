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

from frisr._base import MaskMethod
from frisr._grid import KSpaceGrid, FilterSupport
from ._base import MaskEstimator, MaskEstimate, MaskParams
from ._ls import LeastSquaresEstimator
from ._cadzow import CadzowEstimator
from ._nullavg import NullSpaceEstimator


def get_estimator(method: MaskMethod, params: MaskParams = None) -> MaskEstimator:
    """
    Factory function to get the mask estimator for a method.

    Args:
        method (MaskMethod): ls, cadzow or nullavg.
        params (MaskParams): Estimation parameters; defaults apply when None.

    Returns:
        MaskEstimator: An estimator instance for the method.
    """
    method = MaskMethod(method)
    if method == MaskMethod.LS:
        return LeastSquaresEstimator(params)
    elif method == MaskMethod.CADZOW:
        return CadzowEstimator(params)
    elif method == MaskMethod.NULLAVG:
        return NullSpaceEstimator(params)
    else:
        raise ValueError(f"Unsupported mask method: {method}")


def estimate_pipeline(ksp: KSpaceGrid, method: MaskMethod, support: FilterSupport = None, params: MaskParams = None) -> MaskEstimate:
    """Derivative-weights the samples, builds the system and renders the edge mask with one method."""
    return get_estimator(method, params).estimate(ksp, support)
