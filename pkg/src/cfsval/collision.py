"""Pairwise leg interference: analytic capsule predicate plus a sampling oracle."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from cfsval.geometry import (
    capsule_clearance,
    point_segment_distance_batch,
    segment_distance_batch,
    segment_segment_distance,
)
from cfsval.manipulator import leg_capsules, moving_vertices_batch, platform_vertices

# 1-based leg pairs in lexicographic order.
ALL_PAIRS = tuple(itertools.combinations(range(1, 7), 2))


@dataclass(frozen=True)
class CollisionRecord:
    pair: tuple
    clearance: float
    colliding: bool
    witness: tuple


@dataclass(frozen=True)
class PoseClearance:
    min_clearance: float
    worst_pair: tuple
    records: list


def normalize_pairs(pairs):
    """Validate a pair filter and return it as a sorted tuple of ``(i, j)``, i < j."""
    if pairs is None or (isinstance(pairs, str) and pairs == "all"):
        return ALL_PAIRS
    out = set()
    for pair in pairs:
        i, j = (int(v) for v in pair)
        if not (1 <= i <= 6 and 1 <= j <= 6) or i == j:
            raise ValueError(f"invalid leg pair {tuple(pair)!r}")
        out.add((min(i, j), max(i, j)))
    if not out:
        raise ValueError("pair filter must contain at least one pair")
    return tuple(sorted(out))


def pair_collision(cap_i, cap_j, pair=(1, 2)):
    """Tangent capsules (zero clearance) do not collide."""
    dist, witness = segment_segment_distance(cap_i.axis, cap_j.axis)
    clearance = dist - (cap_i.radius + cap_j.radius)
    return CollisionRecord(pair=tuple(pair), clearance=clearance,
                           colliding=bool(clearance < 0.0), witness=witness)


def pose_min_clearance(arch, pose, pair_filter=None):
    pairs = normalize_pairs(pair_filter)
    caps = leg_capsules(arch, pose)
    records = [pair_collision(caps[i - 1], caps[j - 1], (i, j)) for i, j in pairs]
    # min() keeps the first minimum, i.e. the lexicographically smallest pair.
    worst = min(records, key=lambda rec: rec.clearance)
    return PoseClearance(worst.clearance, worst.pair, records)


def batch_pair_clearances(arch, positions, c, pairs):
    """Clearance of each pair at each MP position, shape ``(n, len(pairs))``.

    Vectorised equivalent of calling ``pose_min_clearance`` per position.
    """
    b = platform_vertices(arch).b
    a = moving_vertices_batch(arch, positions, c)
    ii = np.array([i - 1 for i, _ in pairs])
    jj = np.array([j - 1 for _, j in pairs])
    dist, _, _ = segment_distance_batch(b[ii][None], a[:, ii], b[jj][None], a[:, jj])
    return dist - 2.0 * arch.r_c


def min_clearance_batch(arch, positions, c, pairs):
    """Per-position minimum clearance and the index (into ``pairs``) attaining it."""
    clear = batch_pair_clearances(arch, positions, c, pairs)
    worst = np.argmin(clear, axis=1)
    return clear[np.arange(len(clear)), worst], worst


def _capsule_lattice(capsule, resolution, keep_slice=None):
    """Points of the capsule solid on an (axis, radial, azimuth) lattice.

    Slices run along the axis from one cap tip to the other; each slice is a
    disc whose radius follows the cylinder or the hemispherical cap. Spacing
    along every lattice direction is at most ``resolution``. ``keep_slice``
    optionally filters slice centres (``(k, 3)`` -> bool mask) before the discs
    are filled in.
    """
    r = capsule.radius
    p = capsule.axis.a
    d = capsule.axis.direction
    length = float(np.linalg.norm(d))
    if length > 0:
        e1 = d / length
    else:
        e1 = np.array([0.0, 0.0, 1.0])
    # Orthonormal frame around the axis.
    helper = np.eye(3)[np.argmin(np.abs(e1))]
    e2 = np.cross(e1, helper)
    e2 /= np.linalg.norm(e2)
    e3 = np.cross(e1, e2)

    n_ax = max(1, math.ceil((length + 2 * r) / resolution))
    s = np.linspace(-r, length + r, n_ax + 1)
    disc = np.where(s < 0, np.sqrt(np.clip(r * r - s * s, 0, None)),
                    np.where(s > length, np.sqrt(np.clip(r * r - (s - length) ** 2, 0, None)), r))
    centres = p + s[:, None] * e1
    if keep_slice is not None:
        mask = keep_slice(centres)
        s, disc, centres = s[mask], disc[mask], centres[mask]
    chunks = []
    for centre, rho_max in zip(centres, disc):
        n_rad = max(1, math.ceil(rho_max / resolution))
        rhos = np.linspace(0.0, rho_max, n_rad + 1)
        pts = [centre[None, :]]
        for rho in rhos[1:]:
            n_az = max(3, math.ceil(2 * math.pi * rho / resolution))
            phi = 2 * math.pi * np.arange(n_az) / n_az
            pts.append(centre + rho * (np.cos(phi)[:, None] * e2 + np.sin(phi)[:, None] * e3))
        chunks.append(np.concatenate(pts))
    if not chunks:
        return np.empty((0, 3))
    return np.concatenate(chunks)


def capsule_overlap_oracle(cap_i, cap_j, resolution=0.5):
    """Brute-force interference test by sampling ``cap_i``'s solid.

    Returns True iff some lattice point of ``cap_i`` lies strictly inside
    ``cap_j``. Never reports overlap for separated or tangent capsules; misses
    only overlaps too shallow to contain a lattice point (penetration depth
    below roughly twice the resolution).
    """
    if not (resolution > 0 and math.isfinite(resolution)):
        raise ValueError(f"resolution must be positive, got {resolution!r}")
    reach = cap_i.radius + cap_j.radius

    def near_j(centres):
        return point_segment_distance_batch(centres, cap_j.axis.a, cap_j.axis.b) <= reach

    pts = _capsule_lattice(cap_i, resolution, keep_slice=near_j)
    if len(pts) == 0:
        return False
    dist = point_segment_distance_batch(pts, cap_j.axis.a, cap_j.axis.b)
    return bool(np.any(dist < cap_j.radius))


__all__ = [
    "ALL_PAIRS",
    "CollisionRecord",
    "PoseClearance",
    "capsule_clearance",
    "capsule_overlap_oracle",
    "normalize_pairs",
    "pair_collision",
    "pose_min_clearance",
]
