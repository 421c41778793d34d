"""Plain-text run configuration: `key = value` lines, '#' comments.

The same config drives every CLI mode; unknown keys are rejected so typos
surface immediately.  Curves: kind = helix | torus_knot | samples (samples
reads a CSV of t,x,y,z rows).  Normal fields: principal | torus_normal |
rotation_minimizing, optionally rotated by a constant q at t = 0.
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from .curves import (
    HelixParams,
    TorusKnotParams,
    curve_from_samples,
    make_helix,
    make_torus_knot,
)
from .errors import ConfigError
from .frames import PrincipalNormalField, RotationMinimizingField, TorusNormalField

_KNOWN_KEYS = {
    "kind", "a", "b", "length", "R", "rho", "n", "csv",
    "normal", "q", "mode", "phi", "width", "grid",
    "mesh_nt", "mesh_nu", "r", "out", "fault",
}

_FLOAT_KEYS = {"a", "b", "length", "R", "rho", "q", "width"}
_INT_KEYS = {"n", "grid", "mesh_nt", "mesh_nu"}


@dataclass
class RunConfig:
    kind: str = "helix"
    a: float = 1.0
    b: float = 1.0
    length: float | None = None
    R: float = 2.0
    rho: float = 1.0
    n: int = 3
    csv: str | None = None
    normal: str = "principal"
    q: float = 0.0
    mode: str | None = None
    phi: str | float = "base"
    width: float | None = None
    grid: int = 2000
    mesh_nt: int = 400
    mesh_nu: int = 9
    r: tuple = (1.0, 2.0, 3.0, 4.0)
    out: str = "."
    fault: str = "none"


def parse_config(path):
    cfg = RunConfig()
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key '{key}'")
        try:
            if key in _FLOAT_KEYS:
                setattr(cfg, key, float(value))
            elif key in _INT_KEYS:
                setattr(cfg, key, int(value))
            elif key == "r":
                cfg.r = tuple(float(x) for x in value.split(","))
            elif key == "phi":
                cfg.phi = value if value == "base" else float(value)
            else:
                setattr(cfg, key, value)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for '{key}': {value}") from exc
    _check_finite(cfg)
    return cfg


def _check_finite(cfg):
    for key in _FLOAT_KEYS:
        value = getattr(cfg, key)
        if value is not None and not np.isfinite(value):
            raise ConfigError(f"config value '{key}' is not finite")


def build_curve(cfg):
    if cfg.kind == "helix":
        return make_helix(HelixParams(cfg.a, cfg.b, cfg.length))
    if cfg.kind == "torus_knot":
        return make_torus_knot(TorusKnotParams(cfg.R, cfg.rho, cfg.n))
    if cfg.kind == "samples":
        if not cfg.csv:
            raise ConfigError("kind = samples requires a 'csv' path")
        ts, pts = [], []
        try:
            with open(cfg.csv, newline="") as fh:
                for row in csv.reader(fh):
                    if not row or row[0].strip().startswith("#"):
                        continue
                    try:
                        vals = [float(x) for x in row]
                    except ValueError:
                        continue  # header row
                    ts.append(vals[0])
                    pts.append(vals[1:4])
        except OSError as exc:
            raise ConfigError(f"cannot read samples CSV {cfg.csv}: {exc}") from exc
        if len(ts) < 4:
            raise ConfigError("samples CSV needs at least 4 data rows")
        return curve_from_samples(ts, pts)
    raise ConfigError(f"unknown curve kind '{cfg.kind}'")


def build_base_field(cfg, curve):
    """The un-rotated reference normal field selected by the config."""
    if cfg.normal == "principal":
        return PrincipalNormalField(curve)
    if cfg.normal == "torus_normal":
        if not hasattr(curve, "surface_normal_raw"):
            raise ConfigError("normal = torus_normal requires kind = torus_knot")
        return TorusNormalField(curve)
    if cfg.normal == "rotation_minimizing":
        return RotationMinimizingField(curve)
    raise ConfigError(f"unknown normal field '{cfg.normal}'")


def format_value(x):
    """Deterministic CSV number format: 17 significant digits."""
    return f"{float(x):.17g}"


def write_csv(path, header, rows):
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(x if isinstance(x, str) else format_value(x) for x in row) + "\n")
