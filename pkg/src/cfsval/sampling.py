"""Deterministic sample positions inside the spherical validation shell."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from cfsval.geometry import _as_vec3


@dataclass(frozen=True)
class ShellSpec:
    center: np.ndarray
    r_inner: float
    r_outer: float
    delta_r: float

    def __post_init__(self):
        object.__setattr__(self, "center", _as_vec3(self.center, "shell center"))
        if not (0 < self.r_inner < self.r_outer):
            raise ValueError(f"need 0 < r_inner < r_outer, got {self.r_inner}, {self.r_outer}")
        if not self.delta_r > 0:
            raise ValueError(f"delta_r must be positive, got {self.delta_r}")

    @classmethod
    def around(cls, center, r3, delta, delta_r):
        """Shell of half-width ``delta * r3`` around a sphere of radius ``r3``."""
        if not 0 < delta < 1:
            raise ValueError(f"delta must lie in (0, 1), got {delta}")
        return cls(center, r3 * (1.0 - delta), r3 * (1.0 + delta), delta_r)


@dataclass(frozen=True)
class SampleSet:
    points: np.ndarray        # (n, 3)
    radii: np.ndarray         # radius grid, (n_r,)
    radius_index: np.ndarray  # (n,) index into ``radii``

    @property
    def point_radii(self):
        return self.radii[self.radius_index]

    def __len__(self):
        return len(self.points)


def shell_radii(spec):
    """Radius grid ``r_inner + m * delta_r`` for ``m = 0 .. n_r - 1``.

    ``n_r`` is the thickness/resolution ratio rounded half-up, at least 1.
    """
    n_r = max(1, math.floor((spec.r_outer - spec.r_inner) / spec.delta_r + 0.5))
    return spec.r_inner + spec.delta_r * np.arange(n_r)


def usrp_points(n_target):
    """Regular equal-area placement of about ``n_target`` unit vectors.

    Latitude rings at colatitudes ``pi (m + 1/2) / M_theta``; each ring carries a
    number of equally spaced azimuths proportional to its circumference, with the
    first azimuth at phi = 0. Output is ordered ring by ring from the +z pole.
    """
    if int(n_target) != n_target or n_target < 1:
        raise ValueError(f"n_target must be a positive integer, got {n_target!r}")
    area = 4.0 * math.pi / n_target
    d = math.sqrt(area)
    m_theta = max(1, round(math.pi / d))
    d_theta = math.pi / m_theta
    d_phi = area / d_theta
    rings = []
    for m in range(m_theta):
        theta = math.pi * (m + 0.5) / m_theta
        m_phi = round(2.0 * math.pi * math.sin(theta) / d_phi)
        if m_phi == 0:
            continue
        phi = 2.0 * math.pi * np.arange(m_phi) / m_phi
        st = math.sin(theta)
        rings.append(np.column_stack([st * np.cos(phi), st * np.sin(phi),
                                      np.full(m_phi, math.cos(theta))]))
    return np.concatenate(rings)


def shell_samples(spec, n_s):
    """Every USRP direction on every grid sphere, radius-major."""
    dirs = usrp_points(n_s)
    radii = shell_radii(spec)
    points = spec.center + (radii[:, None, None] * dirs[None, :, :]).reshape(-1, 3)
    index = np.repeat(np.arange(len(radii)), len(dirs))
    return SampleSet(points=points, radii=radii, radius_index=index)
