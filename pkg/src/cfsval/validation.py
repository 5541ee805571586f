"""Shell-sampling validation of a collision-free sphere, and a radius estimator."""

from __future__ import annotations

import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from cfsval.collision import min_clearance_batch, normalize_pairs
from cfsval.geometry import _as_vec3
from cfsval.sampling import ShellSpec, shell_samples, usrp_points

log = logging.getLogger(__name__)

# Fixed work-unit size; results never depend on how chunks are scheduled.
CHUNK = 2048
# Radius slack for the inside-the-sphere test (mm).
INSIDE_TOL = 1e-9


def resolve_threads(threads):
    if threads is None or threads == 0:
        return os.cpu_count() or 1
    if threads < 0:
        raise ValueError(f"threads must be >= 0, got {threads}")
    return int(threads)


def _map_chunks(fn, n, threads):
    """Apply ``fn(lo, hi)`` over fixed index chunks and return results in order."""
    bounds = [(lo, min(lo + CHUNK, n)) for lo in range(0, n, CHUNK)]
    threads = resolve_threads(threads)
    if threads == 1 or len(bounds) <= 1:
        return [fn(lo, hi) for lo, hi in bounds]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda b: fn(*b), bounds))


@dataclass(frozen=True)
class ValidationConfig:
    arch: object
    orientation: np.ndarray
    r3: float
    delta_r: float
    n_s: int
    delta: float = 0.1
    pair_filter: tuple = "all"
    r_inner: float | None = None
    r_outer: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "orientation", _as_vec3(self.orientation, "orientation"))
        object.__setattr__(self, "pair_filter", normalize_pairs(self.pair_filter))
        if not (math.isfinite(self.r3) and self.r3 > 0):
            raise ValueError(f"r3 must be positive, got {self.r3!r}")
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta!r}")
        if not self.delta_r > 0:
            raise ValueError(f"delta_r must be positive, got {self.delta_r!r}")
        if int(self.n_s) != self.n_s or self.n_s < 1:
            raise ValueError(f"n_s must be a positive integer, got {self.n_s!r}")

    def shell(self):
        r_in = self.r3 * (1.0 - self.delta) if self.r_inner is None else self.r_inner
        r_out = self.r3 * (1.0 + self.delta) if self.r_outer is None else self.r_outer
        return ShellSpec(self.arch.neutral_point, r_in, r_out, self.delta_r)


@dataclass(frozen=True)
class SampleResult:
    index: int
    position: np.ndarray
    radius: float
    min_clearance: float
    worst_pair: tuple
    safe: bool


@dataclass
class ValidationReport:
    config: ValidationConfig
    shell: ShellSpec
    radii: np.ndarray           # radius grid
    n_directions: int           # actual USRP count per sphere
    positions: np.ndarray       # (n, 3)
    sample_radius: np.ndarray   # (n,)
    min_clearance: np.ndarray   # (n,)
    worst_pair: np.ndarray      # (n, 2), 1-based legs
    timing: float = 0.0
    unsafe: list = field(init=False)
    unsafe_inside_cfs: list = field(init=False)

    def __post_init__(self):
        self.unsafe = [self.sample(k) for k in np.flatnonzero(self.min_clearance < 0.0)]
        limit = self.config.r3 + INSIDE_TOL
        self.unsafe_inside_cfs = [u for u in self.unsafe if u.radius <= limit]

    @property
    def total_samples(self):
        return len(self.positions)

    @property
    def safe(self):
        return self.min_clearance >= 0.0

    @property
    def verdict(self):
        return "validated" if not self.unsafe_inside_cfs else "violated"

    def sample(self, k):
        k = int(k)
        return SampleResult(
            index=k,
            position=self.positions[k],
            radius=float(self.sample_radius[k]),
            min_clearance=float(self.min_clearance[k]),
            worst_pair=(int(self.worst_pair[k, 0]), int(self.worst_pair[k, 1])),
            safe=bool(self.min_clearance[k] >= 0.0),
        )


def validate_cfs(config, threads=1):
    """Check every shell sample for leg interference at the fixed orientation.

    The sphere of radius ``config.r3`` is validated iff no unsafe sample lies at
    a radius ``<= r3``.
    """
    start = time.perf_counter()
    shell = config.shell()
    samples = shell_samples(shell, config.n_s)
    pairs = config.pair_filter

    def work(lo, hi):
        return min_clearance_batch(config.arch, samples.points[lo:hi], config.orientation, pairs)

    parts = _map_chunks(work, len(samples), threads)
    clearance = np.concatenate([p[0] for p in parts])
    worst = np.array(pairs)[np.concatenate([p[1] for p in parts])]
    report = ValidationReport(
        config=config,
        shell=shell,
        radii=samples.radii,
        n_directions=len(samples) // len(samples.radii),
        positions=samples.points,
        sample_radius=samples.point_radii,
        min_clearance=clearance,
        worst_pair=worst,
        timing=time.perf_counter() - start,
    )
    log.info("validated %d samples in %.2fs: %d unsafe, %d inside r3",
             report.total_samples, report.timing, len(report.unsafe),
             len(report.unsafe_inside_cfs))
    return report


@dataclass
class EstimateResult:
    r3_est: float
    limiting_direction: np.ndarray
    censored: bool
    directions: np.ndarray       # (n, 3) unit vectors
    first_collision: np.ndarray  # (n,) per-direction clear radius
    hit: np.ndarray              # (n,) False: first_collision is only a lower bound
    timing: float = 0.0


def _first_collision_along(arch, c, pairs, centre, dirs, r_max, tol, profile=False):
    """Per-direction safe radius just below the first collision, within ``tol``.

    Marches outward along each ray and bisects the first bracket whose far end
    collides. With the orientation fixed, every leg endpoint translates with
    the platform, so clearance is 1-Lipschitz in position: a clearance ``g`` at
    radius ``r`` certifies the ray clear up to ``r + g``. The march therefore
    steps by ``max(g, 10 * tol)``, never coarser than the certified gap or the
    fixed ``10 * tol`` floor. Directions clear up to ``r_max`` report ``r_max``.

    Unless ``profile`` is set, a direction is dropped once its certified-clear
    radius reaches the closest collision found so far; it cannot lower the
    minimum, and its entry is only a lower bound (``hit`` False).
    """
    n = len(dirs)
    floor = 10.0 * tol

    def clearance(idx, r):
        return min_clearance_batch(arch, centre + r[:, None] * dirs[idx], c, pairs)[0]

    g0 = clearance(np.array([0]), np.zeros(1))[0] if n else 1.0
    if g0 < 0.0:
        return np.zeros(n), np.ones(n, dtype=bool)

    lo = np.zeros(n)
    hi = np.full(n, np.nan)
    r = np.full(n, min(max(g0, floor), r_max))
    active = np.ones(n, dtype=bool)
    best = np.inf
    while True:
        if not profile:
            active &= lo < best
        idx = np.flatnonzero(active)
        if len(idx) == 0:
            break
        g = clearance(idx, r[idx])
        hit = g < 0.0
        hi[idx[hit]] = r[idx[hit]]
        if hit.any():
            best = min(best, float(r[idx[hit]].min()))
        clear = idx[~hit]
        lo[clear] = r[clear]
        done = r[clear] >= r_max
        active[idx[hit]] = False
        active[clear[done]] = False
        r[clear] = np.minimum(r[clear] + np.maximum(g[~hit], floor), r_max)

    found = ~np.isnan(hi)
    idx = np.flatnonzero(found)
    a, b = lo[idx], hi[idx]
    while len(idx) and np.max(b - a) > tol:
        mid = 0.5 * (a + b)
        hit = clearance(idx, mid) < 0.0
        b = np.where(hit, mid, b)
        a = np.where(hit, a, mid)
    out = lo.copy()
    out[idx] = a
    return out, found


def estimate_cfs(arch, orientation, n_directions, r_max, tol, pair_filter="all",
                 threads=1, profile=False):
    """Estimate the collision-free sphere radius about the neutral point.

    For each USRP direction the first collision radius is located; the estimate
    is the minimum over directions of the largest radius known to be clear.
    ``censored`` is True when no direction collides within ``r_max``. With
    ``profile`` every direction is marched to its own first collision (slower;
    useful for plotting the collision-distance map).
    """
    if int(n_directions) != n_directions or n_directions < 1:
        raise ValueError(f"n_directions must be a positive integer, got {n_directions!r}")
    if not (math.isfinite(r_max) and math.isfinite(tol) and 0 < tol < r_max):
        raise ValueError(f"need 0 < tol < r_max, got tol={tol!r}, r_max={r_max!r}")
    start = time.perf_counter()
    c = _as_vec3(orientation, "orientation")
    pairs = normalize_pairs(pair_filter)
    dirs = usrp_points(n_directions)
    centre = arch.neutral_point

    def work(lo, hi):
        return _first_collision_along(arch, c, pairs, centre, dirs[lo:hi], r_max, tol,
                                      profile)

    parts = _map_chunks(work, len(dirs), threads)
    radius = np.concatenate([p[0] for p in parts])
    hit = np.concatenate([p[1] for p in parts])
    censored = not bool(hit.any())
    k = int(np.argmin(radius if censored else np.where(hit, radius, np.inf)))
    return EstimateResult(
        r3_est=float(radius[k]),
        limiting_direction=dirs[k],
        censored=censored,
        directions=dirs,
        first_collision=radius,
        hit=hit,
        timing=time.perf_counter() - start,
    )
