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

from frisr._grid import KSpaceGrid
from ._base import Ellipse, PhantomSpec, TrigRegionPhantom
from ._ellipse import shepp_logan_spec, ellipse_kspace, rasterize, edge_map, load_phantom, save_phantom, BUILTIN_PHANTOMS
from ._trig import trig_region_kspace
from ._noise import add_noise, noise_sigma, NoisyAcquisition
