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

from ._base import ReconConfig, WeightMap, ReconResult, weights_from_mask
from ._operators import forward_op, adjoint_op, scale_samples, gradient, divergence, gradient_magnitude, fft2c, ifft2c
from ._solver import wtv_recon, tv_recon, objective, penalty
from ._metrics import snr, lambda_sweep, ground_truth, SweepRow, SweepResult
