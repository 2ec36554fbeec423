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

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence
import logging
import math

import numpy as np
from tqdm import tqdm

from frisr._base import TruthMode
from frisr._grid import KSpaceGrid
from frisr.phantom import PhantomSpec, ellipse_kspace, rasterize
from ._base import ReconConfig, WeightMap
from ._operators import scale_samples
from ._solver import wtv_recon, tv_recon

logger = logging.getLogger(__name__)


def snr(x: np.ndarray, x0: np.ndarray) -> float:
    """20 log10(||x0|| / ||x - x0||) in dB; +inf when x equals x0."""
    x = np.asarray(x)
    x0 = np.asarray(x0)
    if x.shape != x0.shape:
        raise ValueError(f"Image shapes differ: {x.shape} vs {x0.shape}")
    ref = np.linalg.norm(x0)
    if ref == 0:
        raise ValueError("The reference image is all zero")
    err = np.linalg.norm(x - x0)
    if err == 0:
        return math.inf
    return float(20 * math.log10(ref / err))


@dataclass(frozen=True)
class SweepRow:
    lam: float
    snr_db: float
    objective: float
    iters: int


@dataclass(frozen=True)
class SweepResult:
    rows: tuple

    @property
    def best(self) -> SweepRow:
        # first row wins ties
        return max(self.rows, key=lambda row: row.snr_db)

    @property
    def best_lambda(self) -> float:
        return self.best.lam


def lambda_sweep(b: KSpaceGrid, W: WeightMap, lambdas: Sequence[float], x0: np.ndarray, cfg: ReconConfig = None, workers: int = 1, desc: str = "lambda sweep") -> SweepResult:
    """Runs the weighted-TV solver for every lambda and scores each result against x0."""
    lambdas = [float(lam) for lam in lambdas]
    if not lambdas:
        raise ValueError("The lambda list is empty")
    cfg = cfg or ReconConfig()

    def run(lam: float) -> SweepRow:
        result = wtv_recon(b, W, replace(cfg, lam=lam))
        return SweepRow(lam, snr(result.image, x0), result.objective, result.iters)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        rows = list(tqdm(pool.map(run, lambdas), total=len(lambdas), desc=desc, unit="lambda"))
    sweep = SweepResult(tuple(rows))
    logger.info(f"{desc}: best SNR {sweep.best.snr_db:.2f} dB at lambda={sweep.best_lambda:g}")
    return sweep


def ground_truth(spec: PhantomSpec, size: tuple, mode: TruthMode = TruthMode.RASTER, supersample: int = 4, cfg: ReconConfig = None) -> np.ndarray:
    """
    Reference image x0 for SNR scoring.

    ``raster`` averages supersampled point evaluations of the phantom; ``full-tv`` is a
    TV reconstruction from the largest odd window the grid supports.
    """
    mode = TruthMode(mode)
    if mode == TruthMode.RASTER:
        return rasterize(spec, size, supersample)
    nx, ny = size
    kx_max, ky_max = (nx - 1) // 2, (ny - 1) // 2
    b = scale_samples(ellipse_kspace(spec, kx_max, ky_max), size)
    cfg = cfg or ReconConfig(lam=1e-4, max_iters=300)
    logger.info(f"Full-sampling TV reference from a {2 * kx_max + 1}x{2 * ky_max + 1} window with lambda={cfg.lam:g}")
    return tv_recon(b, cfg, size).image
