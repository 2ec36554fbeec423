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

from ._base import atomic_open, sha256, MAGIC_KSPACE, MAGIC_FILTER, MAGIC_IMAGE
from ._records import (
    write_kspace, read_kspace,
    write_filter, read_filter,
    write_image, read_image,
    write_mask, read_mask,
    write_null_basis, read_null_basis,
    write_singular_values,
    write_sweep, read_sweep,
    SWEEP_HEADER,
)
