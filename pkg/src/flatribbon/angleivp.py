"""Rotation-angle initial value problems and their closed-form solutions.

Rotating a Darboux frame about the tangent by theta(t) changes the ruling
angle of the associated flat ribbon; prescribing that angle turns into a
first-order nonlinear ODE for theta, globally solvable because the right
hand side is Lipschitz in theta.  A fixed-step classical RK4 integrator
is used throughout: the right hand side is smooth, so adaptivity buys
nothing and determinism keeps the tests simple.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .curves import KAPPA_MIN, frenet_data
from .errors import NormalCurvatureZero, StepSizeUnderflow, VanishingCurvature
from .numerics import arccot, cumulative_simpson_uniform, odd_node_count

__all__ = [
    "InitialCondition",
    "ThetaSolution",
    "rhs_prescribed",
    "rhs_same_angle",
    "prescribed_angle_rhs",
    "same_angle_rhs",
    "solve_theta",
    "lipschitz_bound",
    "closed_form_case_b",
    "closed_form_helix_pi2",
    "solved_rotation_field",
    "integrated_torsion",
]


@dataclass(frozen=True)
class InitialCondition:
    t0: float = 0.0
    q: float = 0.0


def rhs_prescribed(t, theta, scalars, phi):
    """theta' for a prescribed ruling angle phi(t) in (0, pi).

    F(t, theta) = cot(phi) (kappa_g sin theta - kappa_n cos theta) - tau_g.
    """
    cot = np.cos(phi) / np.sin(phi)
    return cot * (scalars.kappa_g * np.sin(theta) - scalars.kappa_n * np.cos(theta)) - scalars.tau_g


def rhs_same_angle(t, theta, scalars):
    """theta' for a ribbon sharing the ruling angle of the base field.

    Requires kappa_n != 0; reformulate through :func:`rhs_prescribed` with
    phi equal to the (continuously extended) base ruling angle otherwise.
    """
    if abs(scalars.kappa_n) < 1e-9:
        raise NormalCurvatureZero(
            f"kappa_n = {scalars.kappa_n:.3e} at t={t:.6g}; use the prescribed-angle form"
        )
    tg = scalars.tau_g
    return tg * np.cos(theta) - tg - (scalars.kappa_g * tg / scalars.kappa_n) * np.sin(theta)


def prescribed_angle_rhs(scalars_fn, phi_fn):
    """Bind the prescribed-angle right hand side to a curve's scalar data."""
    return lambda t, theta: rhs_prescribed(t, theta, scalars_fn(t), phi_fn(t))


def same_angle_rhs(scalars_fn):
    return lambda t, theta: rhs_same_angle(t, theta, scalars_fn(t))


@dataclass
class ThetaSolution:
    """Dense numerical solution of a rotation-angle IVP on [0, L].

    Values are continuous real angles (never wrapped, so theta' stays
    meaningful); ``error_estimate`` comes from a half-step Richardson run.
    """

    ts: np.ndarray
    values: np.ndarray
    derivatives: np.ndarray
    method: str
    step: float
    error_estimate: float
    rhs: object = field(repr=False, default=None)
    _spline: CubicSpline = field(repr=False, default=None)

    def __post_init__(self):
        self._spline = CubicSpline(self.ts, self.values)

    def __call__(self, t):
        return self._spline(t)

    def derivative(self, t):
        # exact along the solution: theta' = F(t, theta(t))
        if self.rhs is not None:
            return self.rhs(t, float(self._spline(t)))
        return self._spline(t, 1)

    def ode_residual(self):
        """Sup of |theta' - F(t, theta)| at grid midpoints, via interpolation."""
        mids = 0.5 * (self.ts[:-1] + self.ts[1:])
        worst = 0.0
        for t in mids:
            worst = max(worst, abs(self._spline(t, 1) - self.rhs(t, float(self._spline(t)))))
        return worst


def _rk4_sweep(rhs, ts, i0, q):
    """Fixed-step RK4 from node i0 outward in both directions."""
    theta = np.empty(len(ts))
    theta[i0] = q
    for direction in (1, -1):
        rng = range(i0, len(ts) - 1) if direction == 1 else range(i0, 0, -1)
        for i in rng:
            t = ts[i]
            h = (ts[i + 1] - t) if direction == 1 else (ts[i - 1] - t)
            y = theta[i]
            k1 = rhs(t, y)
            k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
            k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
            k4 = rhs(t + h, y + h * k3)
            theta[i + direction] = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return theta


def solve_theta(rhs, length, ic=InitialCondition(), grid_size=2000, tol=1e-8):
    """Integrate theta' = F(t, theta) over [0, length] from theta(t0) = q.

    Classical RK4 with step length/grid_size, forward and backward from
    t0 (snapped to the nearest grid node).  The error estimate is the
    maximum deviation from a half-step run; ``tol`` is advisory and only
    recorded, since the method is fixed-step.
    """
    n = max(int(grid_size), 2)
    ts = np.linspace(0.0, float(length), n + 1)
    i0 = int(round(ic.t0 / float(length) * n))
    theta = _rk4_sweep(rhs, ts, i0, ic.q)
    ts_half = np.linspace(0.0, float(length), 2 * n + 1)
    theta_half = _rk4_sweep(rhs, ts_half, 2 * i0, ic.q)
    if not (np.all(np.isfinite(theta)) and np.all(np.isfinite(theta_half))):
        raise StepSizeUnderflow("RK4 produced non-finite values")
    err = float(np.max(np.abs(theta - theta_half[::2])))
    derivs = np.array([rhs(t, y) for t, y in zip(ts, theta)])
    return ThetaSolution(ts, theta, derivs, "rk4", ts[1] - ts[0], err, rhs=rhs)


def lipschitz_bound(scalars_seq, phi_values):
    """Lipschitz constant of the prescribed-angle RHS in theta.

    c = sup|kappa_g cot(phi)| + sup|kappa_n cot(phi)| over the grid.
    """
    phi = np.asarray(phi_values, dtype=float)
    cot = np.cos(phi) / np.sin(phi)
    kg = np.array([s.kappa_g for s in scalars_seq])
    kn = np.array([s.kappa_n for s in scalars_seq])
    return float(np.max(np.abs(kg * cot)) + np.max(np.abs(kn * cot)))


def closed_form_case_b(q, psi):
    """Solution of theta' = tau (cos theta - 1) with theta(0) = q in [0, 2 pi).

    psi is the cumulative torsion integral; the q = 0 branch is the
    constant zero solution.
    """
    q = float(q)
    if q == 0.0:
        return lambda t: 0.0 * np.asarray(t, dtype=float)
    cot_half = np.cos(q / 2.0) / np.sin(q / 2.0)
    return lambda t: 2.0 * arccot(cot_half + psi(t))


def closed_form_helix_pi2(a, b):
    """The linear solution theta(t) = -b t / (a^2 + b^2) for phi = pi/2 on a helix."""
    slope = -float(b) / (float(a) ** 2 + float(b) ** 2)
    return lambda t: slope * np.asarray(t, dtype=float)


def solved_rotation_field(base_field, q, grid_size=2000, scalars_grid=2001, phi=None):
    """Rotate ``base_field`` by the IVP solution with theta(0) = q.

    With ``phi`` given (a callable ruling-angle prescription) the
    prescribed-angle ODE is integrated; otherwise the same-angle shortcut
    is used when kappa_n of the base field stays away from zero, falling
    back to the prescribed form with phi equal to the base ruling angle.
    Returns (rotated_field, theta_solution).
    """
    from .frames import RotatedNormalField, sampled_scalars
    from .ribbon import mu_field

    curve = base_field.curve
    scalars_fn = sampled_scalars(base_field, scalars_grid)
    if phi is not None:
        rhs = prescribed_angle_rhs(scalars_fn, phi)
    else:
        kn_min = min(abs(scalars_fn(t).kappa_n) for t in curve.grid(scalars_grid))
        if kn_min > 1e-6:
            rhs = same_angle_rhs(scalars_fn)
        else:
            mu = mu_field(curve, base_field, grid_size=scalars_grid)
            rhs = prescribed_angle_rhs(scalars_fn, lambda t: arccot(float(mu(t))))
    solution = solve_theta(rhs, curve.length, InitialCondition(0.0, float(q)), grid_size)
    field = RotatedNormalField(base_field, solution, solution.derivative)
    return field, solution


def integrated_torsion(curve, grid_size=2001):
    """psi(t) = integral of the Frenet torsion from 0 to t, as a spline."""
    ts = curve.grid(grid_size)
    tau = np.empty(len(ts))
    for i, t in enumerate(ts):
        fd = frenet_data(curve, t)
        if fd.tau is None:
            raise VanishingCurvature(f"torsion undefined at t={t:.6g} (kappa <= {KAPPA_MIN})")
        tau[i] = fd.tau
    table = cumulative_simpson_uniform(tau, ts[1] - ts[0])
    return CubicSpline(ts, table)
