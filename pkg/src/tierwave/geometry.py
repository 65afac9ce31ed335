"""Cell-site geometry and point-process sampling.

Hexagonal cell, the 18 surrounding interferer positions, equal-area circle
and annulus partition, SPPP sampling and independent thinning.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import hex_area


def interferer_positions(r_c: float) -> np.ndarray:
    """Positions of the 18 interfering macrocell BSs (two surrounding rings).

    Six BSs each at radii sqrt(3)*r_c, 3*r_c and 2*sqrt(3)*r_c.
    """
    if r_c <= 0:
        raise ValueError("r_c must be > 0")
    k = np.arange(6)
    offset = np.pi / 6 + k * np.pi / 3
    aligned = k * np.pi / 3
    z = np.concatenate([
        math.sqrt(3.0) * r_c * np.exp(1j * offset),
        3.0 * r_c * np.exp(1j * aligned),
        2.0 * math.sqrt(3.0) * r_c * np.exp(1j * offset),
    ])
    return np.column_stack([z.real, z.imag])


@dataclass(frozen=True)
class CellGeometry:
    """Hexagonal cell site plus its equal-area circle and interferer ring."""

    r_c: float

    @property
    def area(self) -> float:
        return hex_area(self.r_c)

    @property
    def equivalent_radius(self) -> float:
        """Radius of the circle with the same area as the hexagon."""
        return math.sqrt(self.area / math.pi)

    @property
    def interferers(self) -> np.ndarray:
        return interferer_positions(self.r_c)


@dataclass(frozen=True)
class Hexagon:
    """Hexagon of circumradius r_c centered at the origin, two vertices on
    the x axis."""

    r_c: float

    @property
    def area(self) -> float:
        return hex_area(self.r_c)

    def contains(self, points: np.ndarray) -> np.ndarray:
        x = np.abs(points[..., 0])
        y = np.abs(points[..., 1])
        s3 = math.sqrt(3.0)
        return (y <= s3 / 2 * self.r_c) & (y <= s3 * (self.r_c - x))

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        # rejection from the bounding box; acceptance ratio 3*sqrt(3)/8
        out = np.empty((n, 2))
        k = 0
        while k < n:
            m = max(2 * (n - k), 16)
            cand = np.column_stack([
                rng.uniform(-self.r_c, self.r_c, m),
                rng.uniform(-math.sqrt(3.0) / 2 * self.r_c,
                            math.sqrt(3.0) / 2 * self.r_c, m),
            ])
            cand = cand[self.contains(cand)]
            take = min(len(cand), n - k)
            out[k:k + take] = cand[:take]
            k += take
        return out


@dataclass(frozen=True)
class Disc:
    """Disc region, for femtocell interference fields."""

    radius: float
    center: tuple[float, float] = (0.0, 0.0)

    @property
    def area(self) -> float:
        return math.pi * self.radius**2

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        r = self.radius * np.sqrt(rng.random(n))
        phi = rng.uniform(0.0, 2.0 * np.pi, n)
        return np.column_stack([r * np.cos(phi) + self.center[0],
                                r * np.sin(phi) + self.center[1]])


def sample_hex_uniform(rng: np.random.Generator, r_c: float, n: int) -> np.ndarray:
    """n points uniform over the hexagon of circumradius r_c."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return Hexagon(r_c).sample(rng, n)


def sample_sppp(rng: np.random.Generator, intensity: float, region) -> np.ndarray:
    """Homogeneous SPPP over a region: Poisson count, uniform positions."""
    if intensity < 0:
        raise ValueError("intensity must be >= 0")
    n = rng.poisson(intensity * region.area)
    return region.sample(rng, n)


def thin(rng: np.random.Generator, points: np.ndarray, rho_f: float) -> np.ndarray:
    """Independent thinning: each point retained with probability rho_f."""
    if not 0.0 <= rho_f <= 1.0:
        raise ValueError("rho_f must lie in [0, 1]")
    if len(points) == 0 or rho_f == 1.0:
        return points if rho_f == 1.0 else points[:0]
    return points[rng.random(len(points)) < rho_f]


def faloha_select_prob(k: int, f_f: int) -> float:
    """Probability a femtocell transmitting on k of f_f subchannels uses a
    given subchannel.  Equals k/f_f."""
    if f_f < 1:
        raise ValueError("f_f must be >= 1")
    if not 0 <= k <= f_f:
        raise ValueError("k must lie in [0, f_f]")
    return k / f_f


@dataclass(frozen=True)
class AnnulusPartition:
    """Non-overlapping annuli tiling the equal-area circle."""

    radii: tuple[float, ...]   # R_0 = 0 < R_1 < ... < R_M

    def __post_init__(self):
        r = np.asarray(self.radii)
        if r[0] != 0.0 or not np.all(np.diff(r) > 0):
            raise ValueError("radii must start at 0 and strictly increase")

    @property
    def count(self) -> int:
        return len(self.radii) - 1

    def areas(self) -> np.ndarray:
        r2 = np.asarray(self.radii) ** 2
        return np.pi * np.diff(r2)


def partition_annuli(geometry: CellGeometry, m: int) -> AnnulusPartition:
    """Equal-width partition of [0, equivalent_radius] into m annuli."""
    if m < 1:
        raise ValueError("m must be >= 1")
    radii = np.linspace(0.0, geometry.equivalent_radius, m + 1)
    return AnnulusPartition(tuple(radii))
