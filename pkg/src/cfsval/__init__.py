"""Collision-free sphere validation for semi-regular Stewart-Gough platforms."""

from cfsval.geometry import (
    Capsule,
    Segment,
    capsule_clearance,
    line_line_distance,
    rodrigues_to_rotation,
    rotation_to_rodrigues,
    segment_segment_distance,
)
from cfsval.manipulator import (
    ArchitectureParams,
    Pose,
    leg_capsules,
    leg_lengths,
    platform_vertices,
)
from cfsval.sampling import ShellSpec, shell_radii, shell_samples, usrp_points
from cfsval.collision import (
    ALL_PAIRS,
    capsule_overlap_oracle,
    pair_collision,
    pose_min_clearance,
)
from cfsval.validation import ValidationConfig, estimate_cfs, validate_cfs

__version__ = "0.1.0"
