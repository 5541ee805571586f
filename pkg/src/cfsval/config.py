"""JSON run configuration: architecture, scenario, estimation and output blocks."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from cfsval.collision import normalize_pairs
from cfsval.manipulator import ArchitectureParams
from cfsval.validation import ValidationConfig


class ConfigError(ValueError):
    """Raised for malformed or out-of-range configuration documents."""


_MISSING = object()

ARCH_KEYS = ("r_f_mm", "r_m_mm", "gamma_f_deg", "gamma_m_deg", "r_c_mm", "z0_mm")
SCENARIO_KEYS = ("rodrigues", "r3_mm", "delta", "delta_r_mm", "n_s", "pairs",
                 "r_inner_mm", "r_outer_mm")
ESTIMATE_KEYS = ("n_directions", "r_max_mm", "tol_mm")
OUTPUT_KEYS = ("dir", "formats")
FORMATS = ("json", "csv", "png")


@dataclass
class EstimateSettings:
    n_directions: int
    r_max: float
    tol: float


@dataclass
class OutputSettings:
    dir: str = "cfs_out"
    formats: tuple = FORMATS


@dataclass
class RunConfigFile:
    arch: ArchitectureParams
    validation: ValidationConfig
    estimate: EstimateSettings
    output: OutputSettings = field(default_factory=OutputSettings)


def _block(doc, name, allowed, required=True):
    if name not in doc:
        if required:
            raise ConfigError(f"missing field: {name}")
        return {}
    block = doc[name]
    if not isinstance(block, dict):
        raise ConfigError(f"{name} must be an object")
    unknown = sorted(set(block) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key in {name}: {unknown[0]}")
    return block


def _number(block, key, default=_MISSING, positive=True):
    if key not in block:
        if default is _MISSING:
            raise ConfigError(f"missing field: {key}")
        return default
    v = block[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ConfigError(f"{key} must be a finite number, got {v!r}")
    if positive and v <= 0:
        raise ConfigError(f"{key} must be positive, got {v!r}")
    return float(v)


def _integer(block, key, default=_MISSING):
    v = block.get(key, default)
    if v is _MISSING:
        raise ConfigError(f"missing field: {key}")
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise ConfigError(f"{key} must be a positive integer, got {v!r}")
    return v


def parse_config(text):
    """Parse and validate a run configuration (bytes or str holding JSON)."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ConfigError(f"config is not valid UTF-8: {exc}") from None
    try:
        doc = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(doc) - {"architecture", "scenario", "estimate", "output"})
    if unknown:
        raise ConfigError(f"unknown key: {unknown[0]}")

    ab = _block(doc, "architecture", ARCH_KEYS)
    vals = {k: _number(ab, k) for k in ARCH_KEYS}
    for key in ("gamma_f_deg", "gamma_m_deg"):
        if not vals[key] < 60.0:
            raise ConfigError(f"{key} must lie in (0, 60) degrees, got {vals[key]!r}")
    arch = ArchitectureParams.from_degrees(
        vals["r_f_mm"], vals["r_m_mm"], vals["gamma_f_deg"], vals["gamma_m_deg"],
        vals["r_c_mm"], vals["z0_mm"])

    sb = _block(doc, "scenario", SCENARIO_KEYS)
    c = sb.get("rodrigues", _MISSING)
    if c is _MISSING:
        raise ConfigError("missing field: rodrigues")
    if (not isinstance(c, list) or len(c) != 3
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool)
                       and math.isfinite(x) for x in c)):
        raise ConfigError(f"rodrigues must be a list of 3 finite numbers, got {c!r}")
    r3 = _number(sb, "r3_mm")
    delta = _number(sb, "delta", 0.1)
    if not delta < 1:
        raise ConfigError(f"delta must lie in (0, 1), got {delta!r}")
    try:
        pairs = normalize_pairs(sb.get("pairs", "all"))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"pairs: {exc}") from None
    r_in = _number(sb, "r_inner_mm", None)
    r_out = _number(sb, "r_outer_mm", None)
    try:
        validation = ValidationConfig(
            arch=arch, orientation=c, r3=r3, delta_r=_number(sb, "delta_r_mm"),
            n_s=_integer(sb, "n_s"), delta=delta, pair_filter=pairs,
            r_inner=r_in, r_outer=r_out)
        validation.shell()
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"scenario: {exc}") from None

    eb = _block(doc, "estimate", ESTIMATE_KEYS, required=False)
    estimate = EstimateSettings(
        n_directions=_integer(eb, "n_directions", validation.n_s),
        r_max=_number(eb, "r_max_mm", 2.0 * r3),
        tol=_number(eb, "tol_mm", 0.01),
    )
    if not estimate.tol < estimate.r_max:
        raise ConfigError("tol_mm must be smaller than r_max_mm")

    ob = _block(doc, "output", OUTPUT_KEYS, required=False)
    output = OutputSettings()
    if "dir" in ob:
        if not isinstance(ob["dir"], str) or not ob["dir"]:
            raise ConfigError("dir must be a non-empty string")
        output.dir = ob["dir"]
    if "formats" in ob:
        fmts = ob["formats"]
        if not isinstance(fmts, list) or any(f not in FORMATS for f in fmts):
            raise ConfigError(f"formats must be a list drawn from {list(FORMATS)}")
        output.formats = tuple(f for f in FORMATS if f in fmts)
    return RunConfigFile(arch=arch, validation=validation, estimate=estimate, output=output)


def load_config(path):
    with open(path, "rb") as fh:
        return parse_config(fh.read())
