"""Self-contained invariant checks backing the `ribbon validate` command.

Each check returns its measured value and bound; the CLI prints one line
per check and exits nonzero if any fails.  A fault mode deliberately
perturbs the ruling field so the harness can prove it detects
non-flatness.
"""

from dataclasses import dataclass

import numpy as np

from . import angleivp, energy, ribbon as ribbon_mod
from .curves import HelixParams, TorusKnotParams, frenet_data, make_helix, make_torus_knot
from .frames import (
    DarbouxScalars,
    PrincipalNormalField,
    RotatedNormalField,
    RotationMinimizingField,
    TorusNormalField,
    isometric_partner_angle,
    rotate,
    sampled_scalars,
)
from .numerics import arccot

__all__ = ["Check", "run_checks"]


@dataclass(frozen=True)
class Check:
    name: str
    measured: float
    bound: float

    @property
    def passed(self):
        return self.measured <= self.bound


def _unit_speed_defect(curve, n=301):
    return max(abs(np.linalg.norm(curve.derivative(t, 1)) - 1.0) for t in curve.grid(n))


def run_checks(fault="none"):
    """Run the invariant suite; returns a list of Check results."""
    rng = np.random.default_rng(20220829)
    checks = []
    helix = make_helix(HelixParams(1.0, 1.0))
    pn = PrincipalNormalField(helix)

    checks.append(Check("unit_speed_helix", _unit_speed_defect(helix), 1e-8))

    knot = make_torus_knot(TorusKnotParams())
    checks.append(Check("unit_speed_torus_knot", _unit_speed_defect(knot, 201), 1e-8))

    rmf = RotationMinimizingField(helix)
    defect = 0.0
    for t in helix.grid(101):
        fr = rmf.frame(t)
        gram = np.array([fr.T, fr.H, fr.N]) @ np.array([fr.T, fr.H, fr.N]).T
        defect = max(defect, float(np.max(np.abs(gram - np.eye(3)))))
        defect = max(defect, abs(float(np.dot(np.cross(fr.T, fr.H), fr.N)) - 1.0))
    checks.append(Check("frame_orthonormality", defect, 1e-10))

    worst = 0.0
    for t in helix.grid(41):
        kappa = float(np.linalg.norm(helix.derivative(t, 2)))
        for q in rng.uniform(0.0, 2.0 * np.pi, 5):
            sc = RotatedNormalField(pn, float(q)).scalars(t)
            worst = max(worst, abs(sc.kappa_g**2 + sc.kappa_n**2 - kappa**2))
    checks.append(Check("pythagoras", worst, 1e-8))

    worst = 0.0
    for _ in range(100):
        s = DarbouxScalars(*rng.normal(size=3))
        t1, t2, d1, d2 = rng.normal(size=4)
        composed = rotate(rotate(s, t1, d1), t2, d2)
        direct = rotate(s, t1 + t2, d1 + d2)
        worst = max(
            worst,
            abs(composed.kappa_g - direct.kappa_g),
            abs(composed.kappa_n - direct.kappa_n),
            abs(composed.tau_g - direct.tau_g),
        )
    checks.append(Check("rotation_group_action", worst, 1e-12))

    worst = 0.0
    for _ in range(100):
        s = DarbouxScalars(*rng.normal(size=3))
        r = rotate(s, rng.uniform(0, 2 * np.pi))
        worst = max(worst, abs(r.kappa_g**2 + r.kappa_n**2 - (s.kappa_g**2 + s.kappa_n**2)))
    checks.append(Check("rotate_norm_invariance", worst, 1e-12))

    scalars_fn = sampled_scalars(pn, 2001)
    rhs = angleivp.prescribed_angle_rhs(scalars_fn, lambda t: np.pi / 2.0)
    sol = angleivp.solve_theta(rhs, helix.length, angleivp.InitialCondition(0.0, 0.0), 2000)
    exact = angleivp.closed_form_helix_pi2(1.0, 1.0)
    checks.append(
        Check("helix_ivp_pi2", float(np.max(np.abs(sol.values - exact(sol.ts)))), 1e-6)
    )

    rhs_b = angleivp.same_angle_rhs(scalars_fn)
    sol_b = angleivp.solve_theta(rhs_b, helix.length, angleivp.InitialCondition(0.0, np.pi / 2), 2000)
    psi = angleivp.integrated_torsion(helix)
    exact_b = angleivp.closed_form_case_b(np.pi / 2, psi)
    checks.append(
        Check("case_b_closed_form", float(np.max(np.abs(sol_b.values - exact_b(sol_b.ts)))), 1e-6)
    )

    # Gronwall continuity in the initial condition
    phi = lambda t: np.pi / 4.0
    rhs_p = angleivp.prescribed_angle_rhs(scalars_fn, phi)
    eps = 1e-6
    sol1 = angleivp.solve_theta(rhs_p, helix.length, angleivp.InitialCondition(0.0, 0.3), 2000)
    sol2 = angleivp.solve_theta(rhs_p, helix.length, angleivp.InitialCondition(0.0, 0.3 + eps), 2000)
    grid = helix.grid(101)
    c = angleivp.lipschitz_bound([scalars_fn(t) for t in grid], [phi(t) for t in grid])
    gap = float(np.max(np.abs(sol1.values - sol2.values)))
    checks.append(Check("gronwall_continuity", gap, eps * np.exp(c * helix.length) * 1.000001))

    strip = ribbon_mod.construct_ribbon(helix, pn, 0.1, grid_size=801)
    if fault == "perturb_ruling":
        bad = lambda t: strip.ruling(t) + 0.01 * strip.normal.value(t)
        report = ribbon_mod.flatness_residuals(strip, 101, ruling=bad)
    else:
        report = ribbon_mod.flatness_residuals(strip, 101)
    checks.append(Check("flatness_residuals", max(report.ruling_in_plane, report.tangent_plane), 1e-8))

    worst = 0.0
    for t in helix.grid(41):
        x = strip.ruling(t)
        tangent = helix.derivative(t, 1)
        measured = np.arctan2(np.linalg.norm(np.cross(tangent, x)), float(np.dot(tangent, x)))
        worst = max(worst, abs(measured - ribbon_mod.ruling_angle(strip, t)))
    checks.append(Check("ruling_angle_identity", worst, 1e-10))

    # projection of the ruling segment onto the normal plane has length 2w
    worst = 0.0
    for t in helix.grid(41):
        x = strip.ruling(t)
        tangent = helix.derivative(t, 1)
        proj = x - float(np.dot(x, tangent)) * tangent
        worst = max(worst, abs(2.0 * strip.w * np.linalg.norm(proj) - 2.0 * strip.w))
    checks.append(Check("width_projection", worst, 1e-10))

    e_closed = energy.bending_energy_closed(strip, n_t=801)
    expected = strip.w * helix.length / 2.0
    checks.append(
        Check("rectifying_energy", abs(e_closed.value - expected) / expected, 1e-12)
    )

    checks.append(
        Check(
            "ratio_b_closed_form",
            abs(energy.helix_ratio_b(np.pi, 1.0) - (2.0 - np.pi / 2.0)),
            1e-10,
        )
    )

    tf = TorusNormalField(knot)
    w = 0.5 * ribbon_mod.max_regular_width(knot, tf, grid_size=801)
    knot_ribbon = ribbon_mod.construct_ribbon(knot, tf, w, grid_size=801)
    ec = energy.bending_energy_closed(knot_ribbon, n_t=801)
    eq = energy.bending_energy_quadrature(knot_ribbon, n_t=801, n_u=21)
    checks.append(Check("energy_oracle_equivalence", abs(ec.value - eq.value) / ec.value, 1e-6))

    worst = 0.0
    for _ in range(100):
        s = DarbouxScalars(rng.normal(), rng.normal(), rng.normal())
        if np.hypot(s.kappa_g, s.kappa_n) < 1e-6:
            continue
        partner = rotate(s, isometric_partner_angle(s))
        worst = max(worst, abs(partner.kappa_g - s.kappa_g))
    checks.append(Check("isometric_partner", worst, 1e-12))

    return checks
