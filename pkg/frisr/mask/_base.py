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

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Optional, Sequence
import logging
import math

import numpy as np

from frisr._base import DerivativeKind, MaskMethod, FIRST_ORDER
from frisr._grid import KSpaceGrid, FilterSupport, FilterCoefficients
from frisr.annihilation import AnnihilationSystem, derivative_weight, build_system

logger = logging.getLogger(__name__)


def default_delta(snr_db: float) -> Optional[float]:
    """
    Null-space threshold factor for noiseless data, or None for noisy data.

    None selects the noise-floor rule of ``null_basis``: singular values within a relative
    ``tail`` of the smallest one.
    """
    return 1e-8 if snr_db == math.inf else None


def default_support(ksp: KSpaceGrid) -> FilterSupport:
    """Half the data half-width per axis."""
    return FilterSupport(ksp.kx_max // 2, ksp.ky_max // 2)


@dataclass(frozen=True)
class MaskParams:
    delta: Optional[float] = None
    rank: Optional[int] = None
    expected_nullity: Optional[int] = None
    cadzow_iters: int = 10
    size: tuple = (256, 256)
    kinds: Sequence = FIRST_ORDER
    row_normalize: bool = False
    snr_db: float = math.inf
    tail: float = 0.1

    def __post_init__(self):
        object.__setattr__(self, 'kinds', tuple(DerivativeKind(k) for k in self.kinds))
        object.__setattr__(self, 'size', tuple(int(n) for n in self.size))
        if not self.kinds:
            raise ValueError("At least one derivative kind is needed")
        if len({k.order for k in self.kinds}) != 1:
            raise ValueError("Derivative kinds of different orders cannot share one system")
        if self.delta is not None and not 0 < self.delta <= 1:
            raise ValueError(f"delta must lie in (0, 1], got {self.delta}")
        if not 0 <= self.tail < math.inf:
            raise ValueError(f"tail must be finite and nonnegative, got {self.tail}")
        if self.cadzow_iters < 1:
            raise ValueError(f"cadzow_iters must be >= 1, got {self.cadzow_iters}")
        if self.expected_nullity is not None and self.expected_nullity < 1:
            raise ValueError("expected_nullity must be >= 1")

    def resolved_delta(self) -> Optional[float]:
        if self.delta is not None:
            return self.delta
        delta = default_delta(self.snr_db)
        if delta is None:
            logger.info(f"Using the noise-floor threshold (1 + {self.tail:g}) * sigma_min for snr_db={self.snr_db}")
        else:
            logger.info(f"Using default delta={delta:g} for snr_db={self.snr_db}")
        return delta

    def resolved_rank(self, support: FilterSupport) -> int:
        if self.rank is not None:
            return self.rank
        rank = support.size - (self.expected_nullity or 1)
        logger.info(f"Using default Cadzow rank {rank} for |support|={support.size}")
        return rank


@dataclass(frozen=True, eq=False)
class NullBasis:
    """
    Right singular vectors of the annihilation system below delta * sigma_1.

    ``delta`` is the effective factor, also when the threshold came from the noise floor.

    ``vectors`` has shape (P, |support|); ``singular_values`` lists all |support| values,
    padded with zeros when the system has fewer rows than columns.
    """
    support: FilterSupport
    vectors: np.ndarray
    singular_values: np.ndarray
    delta: float
    fallback: bool = False

    def __post_init__(self):
        vectors = np.atleast_2d(np.asarray(self.vectors, dtype=np.complex128))
        if vectors.shape[0] < 1 or vectors.shape[1] != self.support.size:
            raise ValueError(f"Null basis needs P >= 1 vectors of length {self.support.size}, got {vectors.shape}")
        object.__setattr__(self, 'vectors', vectors)

    @property
    def P(self) -> int:
        return self.vectors.shape[0]

    def coefficients(self, i: int) -> FilterCoefficients:
        return FilterCoefficients.from_vector(self.support, self.vectors[i])

    def mixed(self, unitary: np.ndarray) -> "NullBasis":
        """The basis V U for a P x P matrix U, with the vectors as columns of V."""
        return NullBasis(self.support, np.asarray(unitary).T @ self.vectors, self.singular_values, self.delta, self.fallback)


@dataclass(frozen=True, eq=False)
class EdgeMask:
    pixels: np.ndarray
    method: str = "custom"
    delta: Optional[float] = None
    support: Optional[FilterSupport] = None

    def __post_init__(self):
        pixels = np.asarray(self.pixels, dtype=np.float64)
        if pixels.ndim != 2:
            raise ValueError(f"Edge masks are 2-D images, got shape {pixels.shape}")
        if not np.all(np.isfinite(pixels)) or np.any(pixels < 0):
            raise ValueError("Edge masks must be finite and nonnegative")
        object.__setattr__(self, 'pixels', pixels)

    @property
    def size(self) -> tuple:
        return self.pixels.shape[1], self.pixels.shape[0]

    def provenance(self) -> dict:
        out = {"method": self.method, "delta": self.delta, "nx": self.size[0], "ny": self.size[1]}
        if self.support is not None:
            out.update({"k1": self.support.k1, "l1": self.support.l1})
        return out


@dataclass(frozen=True, eq=False)
class MaskEstimate:
    mask: EdgeMask
    system: AnnihilationSystem
    coeffs: Optional[FilterCoefficients] = None
    basis: Optional[NullBasis] = None
    residual: float = math.nan
    diagnostics: dict = field(default_factory=dict)

    @property
    def singular_values(self) -> Optional[np.ndarray]:
        if self.basis is not None:
            return self.basis.singular_values
        return self.diagnostics.get("singular_values")


def edge_contrast(mask, edges: np.ndarray) -> float:
    """Mean mask value on edge pixels over its mean on the remaining pixels."""
    pixels = mask.pixels if isinstance(mask, EdgeMask) else np.asarray(mask)
    edges = np.asarray(edges, dtype=bool)
    if pixels.shape != edges.shape:
        raise ValueError(f"Mask shape {pixels.shape} does not match edge map shape {edges.shape}")
    if edges.all() or not edges.any():
        raise ValueError("The edge map must contain both edge and non-edge pixels")
    return float(pixels[edges].mean() / pixels[~edges].mean())


class MaskEstimator(ABC):
    method: MaskMethod

    def __init__(self, params: MaskParams = None):
        self.params = params or MaskParams()

    def weighted_grids(self, ksp: KSpaceGrid) -> list:
        return [derivative_weight(ksp, kind) for kind in self.params.kinds]

    def preprocess(self, grids: list, support: FilterSupport, diagnostics: dict) -> list:
        """Hook applied to the derivative-weighted grids before the system is built."""
        return grids

    def estimate(self, ksp: KSpaceGrid, support: FilterSupport = None) -> MaskEstimate:
        if support is None:
            support = default_support(ksp)
            logger.info(f"Using default filter support {support.k1}x{support.l1}")
        diagnostics = {}
        grids = self.preprocess(self.weighted_grids(ksp), support, diagnostics)
        system = build_system(grids, support, self.params.kinds, self.params.row_normalize)
        return self.solve(system, diagnostics)

    @abstractmethod
    def solve(self, system: AnnihilationSystem, diagnostics: dict) -> MaskEstimate:
        pass
