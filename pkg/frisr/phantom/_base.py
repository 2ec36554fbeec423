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
from typing import Callable, Optional
import logging
import math

import numpy as np
import scipy.special as sp_special

from frisr._grid import FilterCoefficients

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Ellipse:
    """
    Ellipse indicator scaled by ``amplitude``, in FOV-normalized coordinates.

    ``semi_axes[0]`` lies along the direction rotated by ``angle`` radians from the x axis,
    ``semi_axes[1]`` perpendicular to it.
    """
    center: tuple
    semi_axes: tuple
    angle: float = 0.0
    amplitude: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, 'center', tuple(float(v) for v in self.center))
        object.__setattr__(self, 'semi_axes', tuple(float(v) for v in self.semi_axes))
        if len(self.center) != 2 or len(self.semi_axes) != 2:
            raise ValueError("Ellipse center and semi_axes must be pairs")
        if not all(a > 0 for a in self.semi_axes):
            raise ValueError(f"Ellipse semi-axes must be strictly positive, got {self.semi_axes}")
        if not math.isfinite(self.amplitude) or not math.isfinite(self.angle):
            raise ValueError("Ellipse amplitude and angle must be finite")

    def half_extent(self) -> tuple:
        a, b = self.semi_axes
        c, s = math.cos(self.angle), math.sin(self.angle)
        return math.hypot(a * c, b * s), math.hypot(a * s, b * c)

    def exceeds_fov(self) -> bool:
        hx, hy = self.half_extent()
        cx, cy = self.center
        return cx - hx < 0 or cx + hx > 1 or cy - hy < 0 or cy + hy > 1

    def contains(self, x, y) -> np.ndarray:
        dx = np.asarray(x) - self.center[0]
        dy = np.asarray(y) - self.center[1]
        c, s = math.cos(self.angle), math.sin(self.angle)
        u = (dx * c + dy * s) / self.semi_axes[0]
        v = (-dx * s + dy * c) / self.semi_axes[1]
        return u * u + v * v <= 1.0

    def kspace(self, kx, ky) -> np.ndarray:
        """
        Closed-form Fourier transform at omega = 2 pi k of the scaled indicator.

        The unit disk transforms to J1(2 pi rho) / rho, stretched by the semi-axes and
        shifted by the center; rho = 0 takes the limit pi, i.e. the area.
        """
        kx = np.asarray(kx, dtype=np.float64)
        ky = np.asarray(ky, dtype=np.float64)
        a, b = self.semi_axes
        c, s = math.cos(self.angle), math.sin(self.angle)
        rho = np.hypot(a * (kx * c + ky * s), b * (-kx * s + ky * c))
        safe = np.where(rho > 0, rho, 1.0)
        radial = np.where(rho > 0, sp_special.j1(2 * np.pi * safe) / safe, np.pi)
        phase = np.exp(-2j * np.pi * (kx * self.center[0] + ky * self.center[1]))
        return self.amplitude * a * b * radial * phase

    def to_dict(self) -> dict:
        return {
            "center": list(self.center),
            "semi_axes": list(self.semi_axes),
            "angle": self.angle,
            "amplitude": self.amplitude,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Ellipse":
        return cls(tuple(d["center"]), tuple(d["semi_axes"]), float(d.get("angle", 0.0)), float(d.get("amplitude", 1.0)))


@dataclass(frozen=True)
class PhantomSpec:
    ellipses: tuple
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, 'ellipses', tuple(self.ellipses))
        if not self.ellipses:
            raise ValueError("A phantom needs at least one ellipse")
        for i, el in enumerate(self.ellipses):
            if el.exceeds_fov():
                logger.warning(f"Ellipse {i} of phantom {self.name} leaves the [0,1]^2 field of view; periodization is not modeled")

    def __add__(self, other: "PhantomSpec") -> "PhantomSpec":
        return PhantomSpec(self.ellipses + other.ellipses, f"{self.name}+{other.name}")

    def __len__(self) -> int:
        return len(self.ellipses)

    def to_dict(self) -> dict:
        return {"name": self.name, "ellipses": [el.to_dict() for el in self.ellipses]}

    @classmethod
    def from_dict(cls, d: dict) -> "PhantomSpec":
        if "ellipses" not in d:
            raise ValueError("Phantom JSON requires an 'ellipses' list")
        return cls(tuple(Ellipse.from_dict(e) for e in d["ellipses"]), d.get("name", "custom"))


@dataclass(frozen=True, eq=False)
class TrigRegionPhantom:
    """
    Image amplitude * profile(r) * 1{mu(r) > 0} on the periodic unit square.

    mu must be real, i.e. its coefficients conjugate-symmetric. ``profile`` is an optional
    intensity function of (x, y) arrays; None means a constant (piecewise-constant image).
    """
    mu: FilterCoefficients
    amplitude: float = 1.0
    profile: Optional[Callable] = field(default=None)
    name: str = "trig-region"

    def __post_init__(self):
        if not self.mu.is_conjugate_symmetric(1e-12):
            raise ValueError("TrigRegionPhantom needs conjugate-symmetric coefficients so that mu is real")
        if not math.isfinite(self.amplitude):
            raise ValueError("Amplitude must be finite")

    def mu_on_grid(self, m: int) -> np.ndarray:
        """Real values of mu at r = (i/m, j/m), shape (m, m) with rows j."""
        support = self.mu.support
        if m < 2 * max(support.k1, support.l1) + 1:
            raise ValueError(f"Grid size {m} too small for filter support {support}")
        padded = np.zeros((m, m), dtype=np.complex128)
        ky = np.arange(-support.l1, support.l1 + 1) % m
        kx = np.arange(-support.k1, support.k1 + 1) % m
        padded[np.ix_(ky, kx)] = self.mu.coeffs
        return np.real(np.fft.ifft2(padded) * (m * m))

    def zero_set_fraction(self, m: int) -> float:
        """Fraction of grid points where |mu| vanishes numerically."""
        mu = self.mu_on_grid(m)
        peak = np.max(np.abs(mu))
        if peak == 0:
            return 1.0
        return float(np.mean(np.abs(mu) <= 1e-9 * peak))

    def image_on_grid(self, m: int) -> np.ndarray:
        mu = self.mu_on_grid(m)
        image = np.where(mu > 0, float(self.amplitude), 0.0)
        if self.profile is not None:
            grid = np.arange(m) / m
            x, y = np.meshgrid(grid, grid)
            image = image * np.asarray(self.profile(x, y))
        return image
