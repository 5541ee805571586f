"""Semi-regular Stewart-Gough platform: vertices, legs and leg capsules."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from cfsval.geometry import Capsule, Segment, _as_vec3, rodrigues_to_rotation


@dataclass(frozen=True)
class ArchitectureParams:
    """Platform geometry. Lengths in mm, angles in radians.

    ``gamma_f``/``gamma_m`` are half the angle subtended at the platform centre
    by the two vertices straddling the local x-axis.
    """

    r_f: float
    r_m: float
    gamma_f: float
    gamma_m: float
    r_c: float
    z0: float

    def __post_init__(self):
        for name in ("r_f", "r_m", "r_c", "z0"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive, got {v!r}")
        for name in ("gamma_f", "gamma_m"):
            v = getattr(self, name)
            if not (math.isfinite(v) and 0 < v < math.pi / 3):
                raise ValueError(f"{name} must lie in (0, pi/3) rad, got {v!r}")

    @classmethod
    def from_degrees(cls, r_f, r_m, gamma_f_deg, gamma_m_deg, r_c, z0):
        return cls(r_f, r_m, math.radians(gamma_f_deg), math.radians(gamma_m_deg), r_c, z0)

    @property
    def neutral_point(self):
        return np.array([0.0, 0.0, self.z0])


# Geometry of the reference build (mm / degrees).
REFERENCE_ARCH = ArchitectureParams.from_degrees(150.0, 75.0, 30.5, 40.5, 8.5, 300.0)


@dataclass(frozen=True)
class Pose:
    """MP centroid ``p`` in the fixed frame and its Rodrigues parameters ``c``."""

    p: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p", _as_vec3(self.p, "position"))
        object.__setattr__(self, "c", _as_vec3(self.c, "Rodrigues parameters"))


@dataclass(frozen=True)
class PlatformVertices:
    b: np.ndarray  # (6, 3), fixed frame
    t: np.ndarray  # (6, 3), moving frame


def vertex_angles(gamma):
    """Vertex angles CCW from the local x-axis, in leg order 1..6."""
    third = 2.0 * math.pi / 3.0
    return np.array([-gamma, gamma, third - gamma, third + gamma,
                     2 * third - gamma, 2 * third + gamma])


def _ring(radius, angles):
    return np.column_stack([radius * np.cos(angles), radius * np.sin(angles),
                            np.zeros_like(angles)])


def platform_vertices(arch):
    return PlatformVertices(b=_ring(arch.r_f, vertex_angles(arch.gamma_f)),
                            t=_ring(arch.r_m, vertex_angles(arch.gamma_m)))


def moving_vertices_batch(arch, positions, c):
    """MP vertices ``a_i = p + R t_i`` for many positions sharing one orientation.

    Returns an array of shape ``(n, 6, 3)``.
    """
    positions = np.atleast_2d(np.asarray(positions, dtype=float))
    R = rodrigues_to_rotation(c)
    t_rot = platform_vertices(arch).t @ R.T
    return positions[:, None, :] + t_rot[None, :, :]


def leg_capsules(arch, pose):
    """Six capsules, leg ``i`` running from ``b_i`` to ``a_i`` with radius ``r_c``."""
    b = platform_vertices(arch).b
    a = moving_vertices_batch(arch, pose.p, pose.c)[0]
    return [Capsule(Segment(b[i], a[i]), arch.r_c) for i in range(6)]


def leg_lengths(arch, pose):
    b = platform_vertices(arch).b
    a = moving_vertices_batch(arch, pose.p, pose.c)[0]
    return np.linalg.norm(a - b, axis=1)
