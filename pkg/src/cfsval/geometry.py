"""Rotation, segment-distance and capsule-clearance primitives.

Every distance routine has a batched form operating on ``(..., 3)`` arrays; the
scalar functions are thin wrappers around it so the validation sweeps and the
single-pair API share one code path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# |d1 x d2| < PARALLEL_EPS * |d1| |d2| selects the parallel branch.
PARALLEL_EPS = 1e-12


def _as_vec3(v, name="vector"):
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"{name} must have shape (3,), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    return arr


@dataclass(frozen=True)
class Segment:
    """Closed segment from ``a`` to ``b`` (mm). Zero length is allowed."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a", _as_vec3(self.a, "segment start"))
        object.__setattr__(self, "b", _as_vec3(self.b, "segment end"))

    @property
    def direction(self):
        return self.b - self.a

    @property
    def length(self):
        return float(np.linalg.norm(self.b - self.a))

    def point(self, u):
        return self.a + u * (self.b - self.a)


@dataclass(frozen=True)
class Capsule:
    """Sphere of ``radius`` swept along ``axis``."""

    axis: Segment
    radius: float

    def __post_init__(self):
        r = float(self.radius)
        if not np.isfinite(r) or r <= 0:
            raise ValueError(f"capsule radius must be positive, got {self.radius!r}")
        object.__setattr__(self, "radius", r)


def skew(v):
    """Cross-product matrix ``[v]x`` such that ``skew(v) @ w == cross(v, w)``."""
    x, y, z = v
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def rodrigues_to_rotation(c):
    """Rotation matrix from Rodrigues parameters ``c = tan(theta/2) * axis``.

    Uses the Cayley form ``R = ((1 - c.c) I + 2 c c^T + 2 [c]x) / (1 + c.c)``.
    """
    c = _as_vec3(c, "Rodrigues parameters")
    cc = float(c @ c)
    return ((1.0 - cc) * np.eye(3) + 2.0 * np.outer(c, c) + 2.0 * skew(c)) / (1.0 + cc)


def rotation_to_rodrigues(R, eps=1e-12):
    """Inverse Cayley map. Undefined for half-turns (``1 + trace(R) <= eps``)."""
    R = np.asarray(R, dtype=float)
    denom = 1.0 + np.trace(R)
    if denom <= eps:
        raise ValueError("rotation is a half-turn; Rodrigues parameters are unbounded")
    W = R - R.T
    return np.array([W[2, 1], W[0, 2], W[1, 0]]) / denom


def _dot(u, v):
    return np.einsum("...i,...i->...", u, v)


def _project(x, p, d, dd):
    """Clamped parameter of the point on ``p + u d`` nearest to ``x``."""
    with np.errstate(divide="ignore", invalid="ignore"):
        u = np.where(dd > 0.0, _dot(x - p, d) / np.where(dd > 0.0, dd, 1.0), 0.0)
    return np.clip(u, 0.0, 1.0)


def segment_distance_batch(p1, q1, p2, q2):
    """Closest points between segments ``p1->q1`` and ``p2->q2``, broadcast over
    leading axes.

    The minimum is taken over the interior critical point of the two carrier
    lines (when it falls inside both segments) and the four endpoint-to-segment
    projections. Each candidate is an actual point pair, so the result never
    undershoots the true distance, and nearly parallel inputs stay accurate.

    Returns
    -------
    dist : ndarray
        Euclidean distance between the closest points.
    s, t : ndarray
        Segment parameters in [0, 1] of the closest points on each segment.
    """
    p1, q1, p2, q2 = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (p1, q1, p2, q2)))
    d1 = q1 - p1
    d2 = q2 - p2
    a = _dot(d1, d1)
    e = _dot(d2, d2)
    n = np.cross(d1, d2)
    nn = _dot(n, n)
    # Lagrange identity form of the line-line solution, free of a*e - b*b cancellation.
    w = p2 - p1
    interior = nn > (PARALLEL_EPS**2) * a * e
    with np.errstate(divide="ignore", invalid="ignore"):
        safe_nn = np.where(interior, nn, 1.0)
        s0 = _dot(np.cross(w, d2), n) / safe_nn
        t0 = _dot(np.cross(w, d1), n) / safe_nn
    interior &= (s0 >= 0.0) & (s0 <= 1.0) & (t0 >= 0.0) & (t0 <= 1.0)
    zero = np.zeros_like(a)
    one = np.ones_like(a)
    cand_s = [np.where(interior, s0, 0.0), zero, one,
              _project(p2, p1, d1, a), _project(q2, p1, d1, a)]
    cand_t = [np.where(interior, t0, 0.0), _project(p1, p2, d2, e), _project(q1, p2, d2, e),
              zero, one]
    S = np.stack(cand_s, axis=-1)
    T = np.stack(cand_t, axis=-1)
    diff = (p1 - p2)[..., None, :] + S[..., None] * d1[..., None, :] - T[..., None] * d2[..., None, :]
    D = np.sqrt(np.einsum("...ki,...ki->...k", diff, diff))
    D[..., 0] = np.where(interior, D[..., 0], np.inf)
    k = np.argmin(D, axis=-1)[..., None]
    take = lambda M: np.take_along_axis(M, k, axis=-1)[..., 0]  # noqa: E731
    return take(D), take(S), take(T)


def segment_segment_distance(s1, s2):
    """Minimum distance between two finite segments and the witness points."""
    dist, s, t = segment_distance_batch(s1.a, s1.b, s2.a, s2.b)
    return float(dist), (s1.point(float(s)), s2.point(float(t)))


def point_segment_distance_batch(x, p, q):
    """Distance from each row of ``x`` (``(n, 3)``) to the segment ``p->q``."""
    x = np.asarray(x, dtype=float)
    d = np.asarray(q, dtype=float) - p
    w = x - p
    dd = float(d @ d)
    if dd == 0.0:
        return np.linalg.norm(w, axis=-1)
    u = np.clip(w @ d / dd, 0.0, 1.0)
    return np.linalg.norm(w - u[..., None] * d, axis=-1)


def line_line_distance(s1, s2):
    """Distance between the infinite lines carrying two non-degenerate segments."""
    d1 = s1.direction
    d2 = s2.direction
    n1 = np.linalg.norm(d1)
    n2 = np.linalg.norm(d2)
    if n1 == 0.0 or n2 == 0.0:
        raise ValueError("line_line_distance needs segments of nonzero length")
    w = s2.a - s1.a
    cross = np.cross(d1, d2)
    nc = np.linalg.norm(cross)
    if nc < PARALLEL_EPS * n1 * n2:
        return float(np.linalg.norm(np.cross(w, d1)) / n1)
    return float(abs(cross @ w) / nc)


def capsule_clearance(c1, c2):
    """Signed gap between two capsules: axis distance minus the summed radii."""
    dist, _ = segment_segment_distance(c1.axis, c2.axis)
    return dist - (c1.radius + c2.radius)
