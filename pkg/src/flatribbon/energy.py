"""Bending energies of flat ribbons.

Two independent routes compute the finite-width energy: brute-force
double quadrature of H^2 dA from the fundamental forms, and the closed
form obtained by integrating the u-direction analytically (a logarithm in
w * lambda, with a series branch near lambda = 0 where the direct
quotient loses precision).  The infinitesimal-width limit, the bound
between same-ruling-angle ribbons, and the closed forms for the two
special ruling-angle choices and for the circular helix live here too.
"""

from dataclasses import dataclass

import numpy as np

from .curves import KAPPA_MIN, frenet_data
from .errors import (
    DegenerateMetric,
    NotCaseA,
    OutsideRegularDomain,
    RulingAngleMismatch,
    VanishingCurvature,
    WidthTooLarge,
)
from .numerics import arccot, cumulative_simpson_uniform, simpson_uniform
from .ribbon import mu_field

SERIES_BRANCH_TOL = 1e-6  # |w * lambda| below which the log quotient switches to its series

__all__ = [
    "FundamentalForms",
    "EnergyReport",
    "CaseAExtrema",
    "EnergyBoundReport",
    "fundamental_forms",
    "mean_curvature",
    "bending_energy_quadrature",
    "bending_energy_closed",
    "limit_energy",
    "energy_bound",
    "case_a_energy",
    "case_a_extrema",
    "case_b_energy",
    "helix_ratio_a",
    "helix_ratio_b",
]


@dataclass(frozen=True)
class FundamentalForms:
    E: float
    F: float
    G: float
    e: float
    f: float = 0.0
    g: float = 0.0

    def area_element(self):
        det = self.E * self.G - self.F**2
        if det <= 0.0:
            raise DegenerateMetric(f"EG - F^2 = {det:.3e}")
        return np.sqrt(det)


@dataclass(frozen=True)
class EnergyReport:
    value: float
    method: str  # closed_form | special_case_lambda_zero | quadrature | limit_formula
    width: float
    error_estimate: float


def _forms_values(mu, mup, kg, kn, u):
    E = (1.0 + u * (mup - kg)) ** 2 + (u * mu * kg) ** 2
    F = mu * (1.0 + u * mup)
    G = 1.0 + mu**2
    e = kn * (1.0 + u * (mup - kg - kg * mu**2))
    return E, F, G, e


def fundamental_forms(ribbon, t, u):
    """First and second fundamental forms of sigma at (t, u)."""
    mu = float(ribbon.mu(t))
    mup = float(ribbon.mu.derivative(t))
    sc = ribbon.normal.scalars(t)
    lam = mup - (1.0 + mu**2) * sc.kappa_g
    if 1.0 + u * lam <= 0.0:
        raise OutsideRegularDomain(f"1 + u*lambda = {1.0 + u * lam:.3e} at (t={t:.6g}, u={u:.6g})")
    E, F, G, e = _forms_values(mu, mup, sc.kappa_g, sc.kappa_n, u)
    return FundamentalForms(E, F, G, e)


def mean_curvature(forms):
    """H = G e / (2 (EG - F^2)) for a flat ribbon (f = g = 0)."""
    det = forms.E * forms.G - forms.F**2
    if det <= 0.0:
        raise DegenerateMetric(f"EG - F^2 = {det:.3e}")
    return forms.G * forms.e / (2.0 * det)


def _per_t_data(ribbon, n_t):
    ts = ribbon.curve.grid(n_t)
    mu = np.array([float(ribbon.mu(t)) for t in ts])
    mup = np.array([float(ribbon.mu.derivative(t)) for t in ts])
    kg = np.empty(len(ts))
    kn = np.empty(len(ts))
    for i, t in enumerate(ts):
        sc = ribbon.normal.scalars(t)
        kg[i], kn[i] = sc.kappa_g, sc.kappa_n
    lam = mup - (1.0 + mu**2) * kg
    return ts, mu, mup, kg, kn, lam


def bending_energy_quadrature(ribbon, n_t=2001, n_u=41):
    """Double composite-Simpson quadrature of H^2 dA over the ribbon.

    Independent oracle for :func:`bending_energy_closed`: it assembles the
    integrand from the fundamental forms and integrates numerically in u.
    """
    # both grids need node counts of the form 4k+1 so that the half-resolution
    # subsample used for the error estimate is still a valid Simpson grid
    n_t = max(5, n_t) + (-(max(5, n_t) - 1)) % 4
    n_u = max(5, n_u) + (-(max(5, n_u) - 1)) % 4
    ts, mu, mup, kg, kn, lam = _per_t_data(ribbon, n_t)
    us = np.linspace(-ribbon.w, ribbon.w, n_u)
    if np.min(1.0 + np.outer(us, lam)) <= 0.0:
        raise OutsideRegularDomain("ribbon is not regular on |u| <= w")
    integrand = np.empty((len(ts), len(us)))
    for j, u in enumerate(us):
        E, F, G, e = _forms_values(mu, mup, kg, kn, u)
        det = E * G - F**2
        integrand[:, j] = (G * e) ** 2 / (4.0 * det**2) * np.sqrt(det)
    hu = us[1] - us[0]
    ht = ts[1] - ts[0]
    inner = np.array([simpson_uniform(row, hu) for row in integrand])
    value = simpson_uniform(inner, ht)
    coarse_inner = np.array([simpson_uniform(row[::2], 2 * hu) for row in integrand[::2]])
    coarse = simpson_uniform(coarse_inner, 2 * ht)
    return EnergyReport(value, "quadrature", ribbon.w, abs(value - coarse) / 15.0)


def _inner_integral(w, lam):
    """Exact u-integral of 1/(1 + u*lambda) over [-w, w], elementwise.

    Equals log((1+w*lambda)/(1-w*lambda))/lambda, with the series
    2w (1 + (w*lambda)^2/3 + (w*lambda)^4/5) near lambda = 0.
    """
    x = w * lam
    out = np.empty_like(lam)
    small = np.abs(x) < SERIES_BRANCH_TOL
    out[small] = 2.0 * w * (1.0 + x[small] ** 2 / 3.0 + x[small] ** 4 / 5.0)
    xs = x[~small]
    out[~small] = np.log((1.0 + xs) / (1.0 - xs)) / lam[~small]
    return out, bool(np.all(small))


def bending_energy_closed(ribbon, n_t=2001):
    """Finite-width bending energy with the u-integration done in closed form."""
    ts, mu, mup, kg, kn, lam = _per_t_data(ribbon, n_t)
    w = ribbon.w
    if w * float(np.max(np.abs(lam))) >= 1.0:
        raise WidthTooLarge(f"w = {w:.6g} exceeds 1/sup|lambda|")
    inner, all_series = _inner_integral(w, lam)
    integrand = 0.25 * (1.0 + mu**2) ** 2 * kn**2 * inner
    h = ts[1] - ts[0]
    value = simpson_uniform(integrand, h)
    coarse = simpson_uniform(integrand[::2], 2 * h)
    method = "special_case_lambda_zero" if all_series else "closed_form"
    return EnergyReport(value, method, w, abs(value - coarse) / 15.0)


def limit_energy(curve, normal_field, w, n_t=2001):
    """Small-width energy (w/2) * integral of kappa_n^2 (1 + cot(alpha)^2)^2.

    cot(alpha) is the continuous extension of mu, so the integrand is zero
    wherever kappa_n vanishes (tau_g vanishes there too).
    """
    mu = mu_field(curve, normal_field, grid_size=n_t)
    ts = mu.ts
    kn = np.array([normal_field.scalars(t).kappa_n for t in ts])
    integrand = kn**2 * (1.0 + mu.values**2) ** 2
    h = ts[1] - ts[0]
    value = 0.5 * w * simpson_uniform(integrand, h)
    coarse = 0.5 * w * simpson_uniform(integrand[::2], 2 * h)
    return EnergyReport(value, "limit_formula", w, abs(value - coarse) / 15.0)


@dataclass(frozen=True)
class EnergyBoundReport:
    energy_base: float
    energy_other: float
    additive_bound: float
    ratio_bound: float | None
    satisfied: bool


def energy_bound(curve, base_field, other_field, w, n_t=2001, angle_tol=1e-6):
    """Upper bounds on the energy of a same-ruling-angle companion ribbon.

    Additive bound: E(other) <= E(base) + (w/2) integral of
    kappa_g^2 (1 + cot(alpha)^2)^2 for the base field.  The ratio bound
    1 + max (kappa_g/kappa_n)^2 applies only when kappa_n never vanishes.
    """
    mu_base = mu_field(curve, base_field, grid_size=n_t)
    mu_other = mu_field(curve, other_field, grid_size=n_t)
    angle_gap = float(np.max(np.abs(arccot(mu_base.values) - arccot(mu_other.values))))
    if angle_gap > angle_tol:
        raise RulingAngleMismatch(f"ruling angles differ by up to {angle_gap:.3e}")
    ts = mu_base.ts
    kg = np.empty(len(ts))
    kn = np.empty(len(ts))
    for i, t in enumerate(ts):
        sc = base_field.scalars(t)
        kg[i], kn[i] = sc.kappa_g, sc.kappa_n
    h = ts[1] - ts[0]
    extra = 0.5 * w * simpson_uniform(kg**2 * (1.0 + mu_base.values**2) ** 2, h)
    e_base = limit_energy(curve, base_field, w, n_t=n_t).value
    e_other = limit_energy(curve, other_field, w, n_t=n_t).value
    additive = e_base + extra
    ratio = None
    if float(np.min(np.abs(kn))) > 1e-9:
        ratio = 1.0 + float(np.max((kg / kn) ** 2))
    satisfied = e_other <= additive + 1e-12 * max(1.0, abs(additive))
    return EnergyBoundReport(e_base, e_other, additive, ratio, satisfied)


def _case_a_arrays(curve, normal_field, n_t):
    ts = curve.grid(n_t)
    kg = np.empty(len(ts))
    kn = np.empty(len(ts))
    tg = np.empty(len(ts))
    for i, t in enumerate(ts):
        sc = normal_field.scalars(t)
        kg[i], kn[i], tg[i] = sc.kappa_g, sc.kappa_n, sc.tau_g
    if float(np.max(np.abs(tg))) > 1e-8:
        raise NotCaseA(f"tau_g is not identically zero (sup {np.max(np.abs(tg)):.3e})")
    return ts, kg, kn


def case_a_energy(curve, normal_field, q, w, n_t=2001):
    """Small-width energy (w/2) integral of (kappa_n cos q - kappa_g sin q)^2.

    Valid for a field with tau_g = 0 (ruling angle pi/2), whose rotated
    family has the constant solution theta = q.
    """
    ts, kg, kn = _case_a_arrays(curve, normal_field, n_t)
    integrand = (kn * np.cos(q) - kg * np.sin(q)) ** 2
    return 0.5 * w * simpson_uniform(integrand, ts[1] - ts[0])


@dataclass(frozen=True)
class CaseAExtrema:
    """Analytic extrema of the constant-angle energy.

    ``q_candidates`` is ordered (maximizer, minimizer); it is empty when the
    energy is independent of q.
    """

    A: float  # integral of kappa_g^2 - kappa_n^2
    B: float  # integral of kappa_g * kappa_n
    q_candidates: tuple
    e_max: float
    e_min: float


def case_a_extrema(curve, normal_field, w, n_t=2001):
    """Analytic extrema of the constant-angle energy over q in [0, 2 pi)."""
    ts, kg, kn = _case_a_arrays(curve, normal_field, n_t)
    h = ts[1] - ts[0]
    A = simpson_uniform(kg**2 - kn**2, h)
    B = simpson_uniform(kg * kn, h)
    K = simpson_uniform(kg**2 + kn**2, h)
    tiny = 1e-10 * max(K, 1e-30)
    if abs(B) <= tiny and abs(A) <= tiny:
        e = 0.25 * w * K
        return CaseAExtrema(A, B, (), e, e)
    if abs(B) <= tiny:
        e0 = 0.5 * w * simpson_uniform(kn**2, h)
        e1 = 0.5 * w * simpson_uniform(kg**2, h)
        qs = (0.0, np.pi / 2.0) if e0 >= e1 else (np.pi / 2.0, 0.0)
        return CaseAExtrema(A, B, qs, max(e0, e1), min(e0, e1))
    # at cot(q) = (A + root)/(2B) one has cos(2q) = A/root, sin(2q) = 2B/root,
    # which minimizes (K - A cos 2q - 2B sin 2q)/4; the other root maximizes
    root = np.sqrt(A**2 + 4.0 * B**2)
    q_at_min = float(arccot((A + root) / (2.0 * B)))
    q_at_max = float(arccot((A - root) / (2.0 * B)))
    e_max = 0.25 * w * (K + root)
    e_min = 0.25 * w * (K - root)
    return CaseAExtrema(A, B, (q_at_max, q_at_min), e_max, e_min)


def case_b_energy(curve, q, w, n_t=2001):
    """Small-width energy of the rotated rectifying developable family.

    q = 0 gives the Sadowsky energy of the rectifying developable itself;
    otherwise the integrand carries the factor ((1 - d^2)/(1 + d^2))^2
    with d = cot(q/2) + psi(t), psi the cumulative torsion.
    """
    ts = curve.grid(n_t)
    kappa = np.empty(len(ts))
    tau = np.empty(len(ts))
    for i, t in enumerate(ts):
        fd = frenet_data(curve, t)
        if fd.kappa <= KAPPA_MIN or fd.tau is None:
            raise VanishingCurvature(f"curvature vanishes at t={t:.6g}")
        kappa[i], tau[i] = fd.kappa, fd.tau
    mu = -tau / kappa
    sadowsky = kappa**2 * (1.0 + mu**2) ** 2
    h = ts[1] - ts[0]
    if float(q) == 0.0:
        return 0.5 * w * simpson_uniform(sadowsky, h)
    psi = cumulative_simpson_uniform(tau, h)
    delta = np.cos(q / 2.0) / np.sin(q / 2.0) + psi
    factor = ((1.0 - delta**2) / (1.0 + delta**2)) ** 2
    return 0.5 * w * simpson_uniform(factor * sadowsky, h)


def helix_ratio_a(q, r):
    """Closed-form normalized energy of the constant-angle helix family."""
    return (2.0 * r + np.sin(2.0 * q) - np.sin(2.0 * (q - r))) / (2.0 * r + np.sin(2.0 * r))


def helix_ratio_b(q, r):
    """Closed-form normalized energy of the rotated rectifying helix family.

    r = b L / (a^2 + b^2); q in (0, 2 pi).  The value for q -> 0 tends
    to 1 (the rectifying developable itself).
    """

    def antiderivative(d):
        return -2.0 * np.arctan(d) + d * (3.0 + d**2) / (1.0 + d**2)

    c = np.cos(q / 2.0) / np.sin(q / 2.0)
    return (antiderivative(c + r) - antiderivative(c)) / r
