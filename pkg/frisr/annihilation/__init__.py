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

from frisr._base import DerivativeKind, ZERO_ORDER, FIRST_ORDER, SECOND_ORDER
from frisr._grid import FilterSupport, FilterCoefficients
from ._base import AnnihilationSystem
from ._system import (
    derivative_weight, build_system, weighted_system, annihilation_residual, block_residuals, square_coeffs,
    convolution_indices, toeplitz_block, check_geometry,
)
