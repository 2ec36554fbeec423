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
"""Centered integer-frequency containers shared by the phantom, annihilation and mask packages."""

from dataclasses import dataclass

import numpy as np


def _centered_array(values, kx_max: int, ky_max: int, what: str) -> np.ndarray:
    shape = (2 * ky_max + 1, 2 * kx_max + 1)
    arr = np.asarray(values, dtype=np.complex128)
    if arr.ndim == 1 and arr.size == shape[0] * shape[1]:
        arr = arr.reshape(shape)
    if arr.shape != shape:
        raise ValueError(f"{what} expects {shape[0] * shape[1]} values on a {shape} grid, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class KSpaceGrid:
    """
    Complex Fourier samples on the window [-kx_max, kx_max] x [-ky_max, ky_max].

    ``values`` has shape (2*ky_max+1, 2*kx_max+1): rows are ky, columns kx, so the
    flattened array is row-major with kx fastest. Frequencies are in cycles per FOV.
    """
    kx_max: int
    ky_max: int
    values: np.ndarray

    def __post_init__(self):
        if self.kx_max < 0 or self.ky_max < 0:
            raise ValueError(f"Window half-widths must be nonnegative, got ({self.kx_max}, {self.ky_max})")
        object.__setattr__(self, 'values', _centered_array(self.values, self.kx_max, self.ky_max, "KSpaceGrid"))

    @classmethod
    def zeros(cls, kx_max: int, ky_max: int) -> "KSpaceGrid":
        return cls(kx_max, ky_max, np.zeros((2 * ky_max + 1, 2 * kx_max + 1), dtype=np.complex128))

    @property
    def shape(self) -> tuple:
        return self.values.shape

    @property
    def size(self) -> int:
        return self.values.size

    @property
    def kx(self) -> np.ndarray:
        return np.arange(-self.kx_max, self.kx_max + 1)

    @property
    def ky(self) -> np.ndarray:
        return np.arange(-self.ky_max, self.ky_max + 1)

    def frequencies(self) -> tuple:
        """Returns the (KX, KY) integer frequency meshes with the shape of ``values``."""
        return np.meshgrid(self.kx, self.ky)

    def at(self, kx: int, ky: int) -> complex:
        return complex(self.values[ky + self.ky_max, kx + self.kx_max])

    def with_values(self, values) -> "KSpaceGrid":
        return KSpaceGrid(self.kx_max, self.ky_max, values)

    def same_extent(self, other: "KSpaceGrid") -> bool:
        return self.kx_max == other.kx_max and self.ky_max == other.ky_max

    def conjugate_symmetry_error(self) -> float:
        """Relative deviation from values[-k] = conj(values[k])."""
        scale = np.linalg.norm(self.values)
        if scale == 0:
            return 0.0
        return float(np.linalg.norm(self.values[::-1, ::-1] - np.conj(self.values)) / scale)


@dataclass(frozen=True)
class FilterSupport:
    """Rectangular filter support [-k1, k1] x [-l1, l1]."""
    k1: int
    l1: int

    def __post_init__(self):
        if self.k1 < 0 or self.l1 < 0:
            raise ValueError(f"Filter half-widths must be nonnegative, got ({self.k1}, {self.l1})")

    @classmethod
    def parse(cls, text: str) -> "FilterSupport":
        """Parses ``K1xL1`` half-widths, e.g. ``15x12``."""
        parts = str(text).lower().split('x')
        if len(parts) != 2:
            raise ValueError(f"Expected filter half-widths like 15x12, got {text!r}")
        return cls(int(parts[0]), int(parts[1]))

    @property
    def shape(self) -> tuple:
        return (2 * self.l1 + 1, 2 * self.k1 + 1)

    @property
    def size(self) -> int:
        return self.shape[0] * self.shape[1]

    @property
    def center_index(self) -> int:
        """Flat index of the (0, 0) coefficient."""
        return self.l1 * (2 * self.k1 + 1) + self.k1

    def doubled(self) -> "FilterSupport":
        return FilterSupport(2 * self.k1, 2 * self.l1)

    def valid_shape(self, kx_max: int, ky_max: int) -> tuple:
        """Shape (rows ky, columns kx) of the valid convolution region inside a window."""
        return (2 * (ky_max - self.l1) + 1, 2 * (kx_max - self.k1) + 1)


@dataclass(frozen=True, eq=False)
class FilterCoefficients:
    """
    Coefficients of a trigonometric polynomial mu(r) = sum_k c[k] exp(j 2 pi <k, r>) on a support.

    ``coeffs`` has shape (2*l1+1, 2*k1+1), rows ky and columns kx.
    """
    support: FilterSupport
    coeffs: np.ndarray

    def __post_init__(self):
        arr = _centered_array(self.coeffs, self.support.k1, self.support.l1, "FilterCoefficients")
        if not np.all(np.isfinite(arr)):
            raise ValueError("Filter coefficients must be finite")
        if not np.any(arr):
            raise ValueError("Filter coefficients must contain at least one nonzero entry")
        object.__setattr__(self, 'coeffs', arr)

    @classmethod
    def from_vector(cls, support: FilterSupport, vector) -> "FilterCoefficients":
        return cls(support, np.asarray(vector, dtype=np.complex128).reshape(support.shape))

    @classmethod
    def from_dict(cls, terms: dict, support: FilterSupport = None) -> "FilterCoefficients":
        """Builds coefficients from ``{(kx, ky): value}``; the support defaults to the smallest fitting one."""
        if support is None:
            support = FilterSupport(max(abs(kx) for kx, _ in terms), max(abs(ky) for _, ky in terms))
        arr = np.zeros(support.shape, dtype=np.complex128)
        for (kx, ky), value in terms.items():
            arr[ky + support.l1, kx + support.k1] += value
        return cls(support, arr)

    @property
    def vector(self) -> np.ndarray:
        return self.coeffs.ravel()

    def at(self, kx: int, ky: int) -> complex:
        return complex(self.coeffs[ky + self.support.l1, kx + self.support.k1])

    def embed(self, support: FilterSupport) -> "FilterCoefficients":
        """Zero-pads the coefficients onto a larger support."""
        if support.k1 < self.support.k1 or support.l1 < self.support.l1:
            raise ValueError(f"Cannot embed support {self.support} into smaller {support}")
        arr = np.zeros(support.shape, dtype=np.complex128)
        dy, dx = support.l1 - self.support.l1, support.k1 - self.support.k1
        arr[dy:dy + self.coeffs.shape[0], dx:dx + self.coeffs.shape[1]] = self.coeffs
        return FilterCoefficients(support, arr)

    def is_conjugate_symmetric(self, rtol: float = 1e-12) -> bool:
        scale = np.linalg.norm(self.coeffs)
        return bool(np.linalg.norm(self.coeffs[::-1, ::-1] - np.conj(self.coeffs)) <= rtol * scale)

    def evaluate(self, x, y) -> np.ndarray:
        """Direct trigonometric-sum evaluation of mu at points (x, y) in FOV coordinates."""
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        kx = np.arange(-self.support.k1, self.support.k1 + 1)
        ky = np.arange(-self.support.l1, self.support.l1 + 1)
        ex = np.exp(2j * np.pi * np.multiply.outer(x, kx))
        ey = np.exp(2j * np.pi * np.multiply.outer(y, ky))
        return np.einsum('...a,ab,...b->...', ey, self.coeffs, ex)
