"""Command-line front end.

    ribbon build|solve|energy|sweep|validate --config <path>
           [--out <dir>] [--grid N] [--width W] [--q Q] [--r R,...]

Exit codes: 0 success, 1 failed validation check, 2 config error,
3 mathematical error (e.g. width beyond the regularity bound), 4 I/O error.
CSV output is deterministic: 17 significant digits, '\\n' line endings.
"""

import argparse
import os
import sys

import numpy as np

from . import angleivp, energy, validate
from .config import RunConfig, build_base_field, build_curve, parse_config, write_csv
from .errors import ConfigError, FlatRibbonError
from .frames import RotatedNormalField
from .ribbon import (
    construct_ribbon,
    flatness_residuals,
    max_regular_width,
    tessellate,
    write_obj,
)


def _make_parser():
    parser = argparse.ArgumentParser(prog="ribbon", description="Flat ribbons along space curves")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("build", "solve", "energy", "sweep", "validate"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=(name != "validate"), help="key = value config file")
        p.add_argument("--out", help="output directory")
        p.add_argument("--grid", type=int, help="override grid size")
        p.add_argument("--width", type=float, help="override ribbon half-width")
        p.add_argument("--q", type=float, help="override initial rotation angle")
        p.add_argument("--r", help="comma-separated r values for sweeps")
    return parser


def _load_config(args):
    cfg = parse_config(args.config) if args.config else RunConfig()
    if args.out is not None:
        cfg.out = args.out
    if args.grid is not None:
        cfg.grid = args.grid
    if args.width is not None:
        cfg.width = args.width
    if args.q is not None:
        cfg.q = args.q
    if args.r is not None:
        cfg.r = tuple(float(x) for x in args.r.split(","))
    return cfg


def _field_and_solution(cfg, curve):
    base = build_base_field(cfg, curve)
    if cfg.q == 0.0:
        return RotatedNormalField(base, 0.0), None
    phi = None
    if cfg.phi != "base":
        phi_value = float(cfg.phi)
        phi = lambda t: phi_value
    return angleivp.solved_rotation_field(base, cfg.q, grid_size=cfg.grid, phi=phi)


def _pick_width(cfg, curve, field):
    if cfg.width is not None:
        return cfg.width
    w_max = max_regular_width(curve, field, grid_size=min(cfg.grid, 1001))
    return 0.1 if np.isinf(w_max) else 0.5 * w_max


def cmd_build(cfg):
    curve = build_curve(cfg)
    field, _ = _field_and_solution(cfg, curve)
    w = _pick_width(cfg, curve, field)
    rib = construct_ribbon(curve, field, w, grid_size=min(cfg.grid, 2001))
    mesh = tessellate(rib, cfg.mesh_nt, cfg.mesh_nu)
    os.makedirs(cfg.out, exist_ok=True)
    tag = f"q{cfg.q:g}"
    write_obj(mesh, os.path.join(cfg.out, f"ribbon_{tag}.obj"))
    report = flatness_residuals(rib, 201)
    rows = []
    for t in curve.grid(201):
        x = rib.ruling(t)
        xp = rib.ruling_derivative(t)
        n = field.value(t)
        tangent = curve.derivative(t, 1)
        rows.append(
            (
                t,
                abs(float(np.dot(x, n))),
                abs(float(np.dot(np.cross(x, tangent), xp))),
                report.gauss_estimate,
            )
        )
    write_csv(
        os.path.join(cfg.out, f"residuals_{tag}.csv"),
        ("t", "ruling_in_plane", "tangent_plane", "gauss_estimate"),
        rows,
    )
    print(f"wrote ribbon_{tag}.obj ({cfg.mesh_nt}x{cfg.mesh_nu}), w = {w:.6g}")
    print(f"flatness residuals: {report.ruling_in_plane:.3e} / {report.tangent_plane:.3e}")
    return 0


def cmd_solve(cfg):
    curve = build_curve(cfg)
    field, solution = _field_and_solution(cfg, curve)
    if solution is None:
        base = build_base_field(cfg, curve)
        _, solution = angleivp.solved_rotation_field(base, 0.0, grid_size=cfg.grid)
    os.makedirs(cfg.out, exist_ok=True)
    path = os.path.join(cfg.out, f"theta_q{cfg.q:g}.csv")
    write_csv(path, ("t", "theta", "theta_prime"), zip(solution.ts, solution.values, solution.derivatives))
    print(f"wrote {path}; step {solution.step:.3e}, error estimate {solution.error_estimate:.3e}")
    return 0


def cmd_energy(cfg):
    curve = build_curve(cfg)
    field, _ = _field_and_solution(cfg, curve)
    w = _pick_width(cfg, curve, field)
    rib = construct_ribbon(curve, field, w, grid_size=min(cfg.grid, 2001))
    reports = [
        ("closed", energy.bending_energy_closed(rib)),
        ("quadrature", energy.bending_energy_quadrature(rib)),
        ("limit", energy.limit_energy(curve, field, w)),
    ]
    os.makedirs(cfg.out, exist_ok=True)
    path = os.path.join(cfg.out, "energy.csv")
    write_csv(
        path,
        ("label", "q", "w", "value", "method", "err_estimate"),
        [(label, cfg.q, r.width, r.value, r.method, r.error_estimate) for label, r in reports],
    )
    for label, r in reports:
        print(f"{label:>10}: {r.value:.12g} ({r.method}, est {r.error_estimate:.2e})")
    return 0


def cmd_sweep(cfg):
    os.makedirs(cfg.out, exist_ok=True)
    qs = np.linspace(0.0, 2.0 * np.pi, 512, endpoint=False)
    for r in cfg.r:
        rows_a = [(q, energy.helix_ratio_a(q, r)) for q in qs]
        rows_b = [(q, 1.0 if q == 0.0 else energy.helix_ratio_b(q, r)) for q in qs]
        write_csv(os.path.join(cfg.out, f"ratioA_r{r:g}.csv"), ("q", "ratio"), rows_a)
        write_csv(os.path.join(cfg.out, f"ratioB_r{r:g}.csv"), ("q", "ratio"), rows_b)
    print(f"wrote ratio tables for r in {list(cfg.r)} to {cfg.out}")
    return 0


def cmd_validate(cfg):
    checks = validate.run_checks(fault=cfg.fault)
    failed = 0
    for c in checks:
        status = "pass" if c.passed else "FAIL"
        print(f"{c.name:<28} measured={c.measured:.3e} bound={c.bound:.3e} {status}")
        failed += not c.passed
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return 1 if failed else 0


_COMMANDS = {
    "build": cmd_build,
    "solve": cmd_solve,
    "energy": cmd_energy,
    "sweep": cmd_sweep,
    "validate": cmd_validate,
}


def main(argv=None):
    args = _make_parser().parse_args(argv)
    try:
        cfg = _load_config(args)
        return _COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except FlatRibbonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
