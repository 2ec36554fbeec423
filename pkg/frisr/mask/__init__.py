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
from ._base import (
    NullBasis, EdgeMask, MaskParams, MaskEstimate, MaskEstimator,
    default_delta, default_support, edge_contrast,
)
from ._ls import estimate_ls, LeastSquaresFit, LeastSquaresEstimator
from ._cadzow import cadzow_denoise, CadzowResult, CadzowEstimator
from ._nullavg import null_basis, NullSpaceEstimator
from ._render import render_mask, render_single_mask, render_filters
from ._util import get_estimator, estimate_pipeline
