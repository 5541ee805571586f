"""Command-line entry points: validate, estimate, dump-samples, check-pose."""

from __future__ import annotations

import argparse
import logging
import os
import sys

import numpy as np

from cfsval.collision import pose_min_clearance
from cfsval.config import ConfigError, load_config
from cfsval.manipulator import Pose
from cfsval.report import (
    estimate_summary,
    fmt,
    validation_summary,
    write_json,
    write_samples_csv,
    write_shell_csv,
)
from cfsval.sampling import shell_samples
from cfsval.validation import estimate_cfs, validate_cfs

log = logging.getLogger("cfsval")

EXIT_OK, EXIT_ERROR, EXIT_VIOLATED = 0, 1, 2


def _vec3(text):
    try:
        parts = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y,z, got {text!r}") from None
    if len(parts) != 3 or not all(np.isfinite(parts)):
        raise argparse.ArgumentTypeError(f"expected three finite numbers, got {text!r}")
    return np.array(parts)


def _pairs(text):
    if text == "all":
        return "all"
    try:
        return [tuple(int(v) for v in item.split("-")) for item in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'all' or pairs like 1-2,2-3, got {text!r}") from None


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cfsval",
        description="Validate or estimate the collision-free sphere of a Stewart-Gough platform.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, outputs=True):
        p.add_argument("--config", required=True, help="JSON run configuration")
        if outputs:
            p.add_argument("--out", help="output directory (overrides output.dir)")
        p.add_argument("--threads", type=int, default=1, help="worker threads, 0 = auto")

    p = sub.add_parser("validate", help="sample the shell and classify every pose")
    common(p)
    p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")

    p = sub.add_parser("estimate", help="estimate the collision-free radius by ray bisection")
    common(p)
    p.add_argument("--profile", action="store_true",
                   help="resolve every direction (slower) and plot the collision map")
    p.add_argument("--no-figures", action="store_true")

    p = sub.add_parser("dump-samples", help="write the shell sample positions only")
    common(p)

    p = sub.add_parser("check-pose", help="print all pair clearances for one pose")
    common(p, outputs=False)
    p.add_argument("--p", type=_vec3, help="MP centre x,y,z in mm (default: neutral point)")
    p.add_argument("--c", type=_vec3, default=np.zeros(3),
                   help="Rodrigues parameters (default: 0,0,0)")
    p.add_argument("--pairs", type=_pairs, default="all", help="'all' or e.g. 1-2,2-3")
    return parser


def _outdir(args, cfg):
    path = args.out or cfg.output.dir
    os.makedirs(path, exist_ok=True)
    return path


def cmd_validate(args, cfg):
    report = validate_cfs(cfg.validation, threads=args.threads)
    out = _outdir(args, cfg)
    fmts = cfg.output.formats
    if "json" in fmts:
        write_json(os.path.join(out, "summary.json"), validation_summary(report))
    if "csv" in fmts:
        write_samples_csv(os.path.join(out, "samples.csv"), report)
        write_samples_csv(os.path.join(out, "unsafe.csv"), report, unsafe_only=True)
    if "png" in fmts and not args.no_figures:
        from cfsval.plotting import plot_clearance_profile, plot_unsafe_points

        plot_unsafe_points(report, os.path.join(out, "unsafe_points.png"))
        plot_clearance_profile(report, os.path.join(out, "clearance_profile.png"))
    radii = [u.radius for u in report.unsafe]
    print(f"samples: {report.total_samples}  unsafe: {len(report.unsafe)}  "
          f"unsafe inside r3: {len(report.unsafe_inside_cfs)}  "
          f"min unsafe radius: {min(radii) if radii else float('nan'):.4f} mm")
    print(f"verdict: {report.verdict}")
    log.info("elapsed %.2fs", report.timing)
    return EXIT_OK if report.verdict == "validated" else EXIT_VIOLATED


def cmd_estimate(args, cfg):
    v, s = cfg.validation, cfg.estimate
    result = estimate_cfs(cfg.arch, v.orientation, s.n_directions, s.r_max, s.tol,
                          v.pair_filter, threads=args.threads, profile=args.profile)
    out = _outdir(args, cfg)
    if "json" in cfg.output.formats:
        write_json(os.path.join(out, "estimate.json"),
                   estimate_summary(cfg.arch, v.orientation, v.pair_filter, s, result))
    if args.profile and "png" in cfg.output.formats and not args.no_figures:
        from cfsval.plotting import plot_collision_map

        plot_collision_map(result, os.path.join(out, "collision_map.png"))
    tag = " (censored)" if result.censored else ""
    print(f"r3_est: {result.r3_est:.4f} mm{tag}")
    print("limiting direction: " + ",".join(fmt(x) for x in result.limiting_direction))
    log.info("elapsed %.2fs", result.timing)
    return EXIT_OK


def cmd_dump(args, cfg):
    samples = shell_samples(cfg.validation.shell(), cfg.validation.n_s)
    out = _outdir(args, cfg)
    path = os.path.join(out, "shell_samples.csv")
    write_shell_csv(path, samples)
    print(f"wrote {len(samples)} samples to {path}")
    return EXIT_OK


def cmd_check_pose(args, cfg):
    p = cfg.arch.neutral_point if args.p is None else args.p
    result = pose_min_clearance(cfg.arch, Pose(p, args.c), args.pairs)
    print("pair,clearance_mm,colliding")
    for rec in result.records:
        print(f"{rec.pair[0]}-{rec.pair[1]},{fmt(rec.clearance)},{int(rec.colliding)}")
    print(f"min_clearance: {fmt(result.min_clearance)} mm at pair "
          f"{result.worst_pair[0]}-{result.worst_pair[1]}")
    return EXIT_OK if result.min_clearance >= 0 else EXIT_VIOLATED


COMMANDS = {
    "validate": cmd_validate,
    "estimate": cmd_estimate,
    "dump-samples": cmd_dump,
    "check-pose": cmd_check_pose,
}


def run_cli(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.threads < 0:
        print("error: --threads must be >= 0", file=sys.stderr)
        return EXIT_ERROR
    try:
        cfg = load_config(args.config)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    try:
        return COMMANDS[args.command](args, cfg)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
