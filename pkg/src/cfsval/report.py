"""Deterministic JSON/CSV serialisation of validation and estimation results."""

from __future__ import annotations

import csv
import json
import math

SAMPLE_COLUMNS = ("index", "x", "y", "z", "radius", "min_clearance", "worst_i", "worst_j", "safe")


def fmt(x):
    """Fixed six-decimal rendering, independent of locale; -0 prints as 0."""
    return f"{float(x) + 0.0:.6f}"


def _round(x, nd=9):
    x = float(x)
    return round(x, nd) + 0.0 if math.isfinite(x) else None


def arch_dict(arch):
    return {
        "r_f_mm": arch.r_f,
        "r_m_mm": arch.r_m,
        "gamma_f_deg": _round(math.degrees(arch.gamma_f)),
        "gamma_m_deg": _round(math.degrees(arch.gamma_m)),
        "r_c_mm": arch.r_c,
        "z0_mm": arch.z0,
    }


def validation_summary(report):
    cfg = report.config
    unsafe_r = [u.radius for u in report.unsafe]
    return {
        "config": {
            "architecture": arch_dict(cfg.arch),
            "rodrigues": [float(v) for v in cfg.orientation],
            "r3_mm": cfg.r3,
            "delta": cfg.delta,
            "delta_r_mm": cfg.delta_r,
            "n_s": cfg.n_s,
            "pairs": [list(p) for p in cfg.pair_filter],
        },
        "shell": {
            "center_mm": [float(v) for v in report.shell.center],
            "r_inner_mm": _round(report.shell.r_inner),
            "r_outer_mm": _round(report.shell.r_outer),
            "radii_mm": [_round(r) for r in report.radii],
            "n_directions": report.n_directions,
        },
        "total_samples": report.total_samples,
        "unsafe_count": len(report.unsafe),
        "unsafe_inside_cfs_count": len(report.unsafe_inside_cfs),
        "min_unsafe_radius_mm": _round(min(unsafe_r)) if unsafe_r else None,
        "min_clearance_mm": _round(report.min_clearance.min()),
        "unsafe_inside_cfs": [u.index for u in report.unsafe_inside_cfs],
        "verdict": report.verdict,
    }


def estimate_summary(arch, orientation, pairs, settings, result):
    return {
        "architecture": arch_dict(arch),
        "rodrigues": [float(v) for v in orientation],
        "pairs": [list(p) for p in pairs],
        "n_directions": int(len(result.directions)),
        "r_max_mm": settings.r_max,
        "tol_mm": settings.tol,
        "r3_est_mm": _round(result.r3_est),
        "limiting_direction": [_round(v) for v in result.limiting_direction],
        "censored": result.censored,
    }


def write_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=False)
        fh.write("\n")


def _sample_rows(report, indices):
    for k in indices:
        x, y, z = report.positions[k]
        yield (str(k), fmt(x), fmt(y), fmt(z), fmt(report.sample_radius[k]),
               fmt(report.min_clearance[k]), str(report.worst_pair[k, 0]),
               str(report.worst_pair[k, 1]), "1" if report.min_clearance[k] >= 0 else "0")


def write_samples_csv(path, report, unsafe_only=False):
    if unsafe_only:
        indices = [u.index for u in report.unsafe]
    else:
        indices = range(report.total_samples)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SAMPLE_COLUMNS)
        w.writerows(_sample_rows(report, indices))


def write_shell_csv(path, samples):
    """Bare sample dump: x, y, z and grid radius per point."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("x", "y", "z", "radius"))
        for (x, y, z), r in zip(samples.points, samples.point_radii):
            w.writerow((fmt(x), fmt(y), fmt(z), fmt(r)))
