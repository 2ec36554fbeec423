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

from dataclasses import dataclass, field
from typing import Optional
import logging
import math

import numpy as np

logger = logging.getLogger(__name__)

# ||grad||^2 <= 8 for periodic forward differences
GRADIENT_NORM_SQ = 8.0


@dataclass(frozen=True)
class ReconConfig:
    """
    Parameters of the weighted-TV solver.

    ``lam`` is the regularization weight (0 returns the zero-filled image). ``tau`` and
    ``sigma`` default to 0.99 / sqrt(8), which satisfies tau * sigma * ||grad||^2 < 1.
    """
    lam: float = 1e-3
    max_iters: int = 500
    tol: float = 1e-5
    tau: Optional[float] = None
    sigma: Optional[float] = None
    check_every: int = 10
    divergence_patience: int = 20
    workers: int = 1
    progress: bool = False

    def __post_init__(self):
        if not math.isfinite(self.lam) or self.lam < 0:
            raise ValueError(f"lambda must be finite and >= 0, got {self.lam}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.tol < 0:
            raise ValueError(f"tol must be >= 0, got {self.tol}")
        if self.check_every < 1 or self.divergence_patience < 1:
            raise ValueError("check_every and divergence_patience must be >= 1")
        tau, sigma = self.steps()
        if tau <= 0 or sigma <= 0 or tau * sigma * GRADIENT_NORM_SQ >= 1:
            raise ValueError(f"Step sizes tau={tau}, sigma={sigma} violate tau * sigma * 8 < 1")

    def steps(self) -> tuple:
        default = 0.99 / math.sqrt(GRADIENT_NORM_SQ)
        return (self.tau if self.tau is not None else default, self.sigma if self.sigma is not None else default)


@dataclass(frozen=True, eq=False)
class WeightMap:
    pixels: np.ndarray

    def __post_init__(self):
        pixels = np.asarray(self.pixels, dtype=np.float64)
        if pixels.ndim != 2:
            raise ValueError(f"Weight maps are 2-D, got shape {pixels.shape}")
        if not np.all(np.isfinite(pixels)) or pixels.min() < 0 or pixels.max() > 1:
            raise ValueError("Weights must be finite and lie in [0, 1]")
        object.__setattr__(self, 'pixels', pixels)

    @classmethod
    def ones(cls, size: tuple) -> "WeightMap":
        nx, ny = size
        return cls(np.ones((ny, nx)))

    @property
    def size(self) -> tuple:
        return self.pixels.shape[1], self.pixels.shape[0]


@dataclass(frozen=True, eq=False)
class ReconResult:
    image: np.ndarray
    objective: float
    iters: int
    converged: bool
    baseline_used: Optional[str] = None
    history: list = field(default_factory=list)


def weights_from_mask(mask, gamma: float = 1.0, floor: float = 0.0) -> WeightMap:
    """W = max(mask ** gamma, floor) for a max-normalized edge mask."""
    pixels = mask.pixels if hasattr(mask, 'pixels') else np.asarray(mask, dtype=np.float64)
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if not 0 <= floor <= 1:
        raise ValueError(f"floor must lie in [0, 1], got {floor}")
    logger.info(f"Weights from mask with gamma={gamma:g}, floor={floor:g}")
    return WeightMap(np.clip(np.maximum(pixels ** gamma, floor), 0.0, 1.0))
