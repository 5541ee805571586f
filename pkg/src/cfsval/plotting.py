"""Matplotlib figures written next to the CSV/JSON reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "figure.figsize": (6.0, 4.5),
    "figure.dpi": 100,
    "font.size": 10,
    "axes.labelsize": 10,
    "axes.titlesize": 11,
    "legend.fontsize": 8,
    "legend.frameon": False,
    "xtick.direction": "out",
    "ytick.direction": "out",
}


def save(fig, path):
    # No Software/date metadata so reruns are byte-identical.
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)


def _sphere_wireframe(ax, centre, radius, n=24):
    u, v = np.meshgrid(np.linspace(0, 2 * np.pi, n), np.linspace(0, np.pi, n // 2))
    ax.plot_wireframe(centre[0] + radius * np.cos(u) * np.sin(v),
                      centre[1] + radius * np.sin(u) * np.sin(v),
                      centre[2] + radius * np.cos(v),
                      color="0.6", linewidth=0.4)


def plot_unsafe_points(report, path):
    """3D scatter of unsafe positions against the sphere under test."""
    with plt.rc_context(STYLE):
        fig = plt.figure()
        ax = fig.add_subplot(projection="3d")
        centre = report.shell.center
        _sphere_wireframe(ax, centre, report.config.r3)
        pts = np.array([u.position for u in report.unsafe]).reshape(-1, 3)
        inside = {u.index for u in report.unsafe_inside_cfs}
        mask = np.array([u.index in inside for u in report.unsafe], dtype=bool)
        if (~mask).any():
            ax.scatter(*pts[~mask].T, s=6, c="tab:red", label="unsafe, outside sphere")
        if mask.any():
            ax.scatter(*pts[mask].T, s=10, c="k", marker="x", label="unsafe, inside sphere")
        ax.set_xlabel("x (mm)")
        ax.set_ylabel("y (mm)")
        ax.set_zlabel("z (mm)")
        ax.set_title(f"r3 = {report.config.r3:g} mm: {len(report.unsafe)} unsafe of "
                     f"{report.total_samples} ({report.verdict})")
        if len(pts):
            ax.legend(loc="upper left")
        save(fig, path)


def plot_clearance_profile(report, path):
    """Minimum leg clearance of every sample against its shell radius."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        safe = report.safe
        ax.plot(report.sample_radius[safe], report.min_clearance[safe], ".",
                ms=2, color="tab:blue", label="safe")
        ax.plot(report.sample_radius[~safe], report.min_clearance[~safe], ".",
                ms=3, color="tab:red", label="unsafe")
        ax.axhline(0.0, color="0.3", lw=0.8)
        ax.axvline(report.config.r3, color="k", ls="--", lw=0.8, label="r3")
        ax.set_xlabel("distance from neutral point (mm)")
        ax.set_ylabel("minimum clearance (mm)")
        ax.legend()
        fig.tight_layout()
        save(fig, path)


def plot_collision_map(result, path):
    """First-collision radius per direction, on an azimuth/colatitude chart."""
    d = result.directions
    theta = np.degrees(np.arccos(np.clip(d[:, 2], -1, 1)))
    phi = np.degrees(np.mod(np.arctan2(d[:, 1], d[:, 0]), 2 * np.pi))
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        sc = ax.scatter(phi[result.hit], theta[result.hit], c=result.first_collision[result.hit],
                        s=4, cmap="viridis")
        ax.scatter(phi[~result.hit], theta[~result.hit], s=2, c="0.85")
        ax.invert_yaxis()
        ax.set_xlabel("azimuth (deg)")
        ax.set_ylabel("colatitude (deg)")
        ax.set_title(f"estimated radius {result.r3_est:.3f} mm")
        if result.hit.any():
            fig.colorbar(sc, ax=ax, label="first collision (mm)")
        fig.tight_layout()
        save(fig, path)
