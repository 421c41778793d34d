"""Flat ribbons along a curve: ruling field, width bound, meshing, residuals.

Given a curve and a normal field with kappa_n != 0 (or with removable
zeros), there is a unique flat ribbon normal to the field, parametrized by
sigma(t, u) = gamma(t) + u (mu(t) T(t) + H(t)) with mu = -tau_g / kappa_n.
This module builds that ribbon, bounds the regular half-width through the
area element 1 + u * lambda, tessellates the surface, and measures how
developable the result actually is.
"""

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import ExtensionOrderExceeded, SingularRuling, WidthTooLarge
from .numerics import arccot, central_difference, odd_node_count

WIDTH_SAFETY = 0.9
LAMBDA_FLAT_TOL = 1e-8  # below this sup|lambda| the regular width is unbounded

__all__ = [
    "MuField",
    "FlatRibbon",
    "RibbonMesh",
    "FlatnessReport",
    "mu_field",
    "construct_ribbon",
    "ruling_angle",
    "max_regular_width",
    "tessellate",
    "flatness_residuals",
    "write_obj",
]


class MuField:
    """The ruling slope mu = -tau_g / kappa_n, continuously extended.

    Sampled on a uniform arc-length grid and interpolated by a cubic
    spline; mu' comes from the spline derivative.
    """

    def __init__(self, ts, values):
        self.ts = np.asarray(ts, dtype=float)
        self.values = np.asarray(values, dtype=float)
        self._spline = CubicSpline(self.ts, self.values)

    def __call__(self, t):
        return self._spline(t)

    def derivative(self, t):
        return self._spline(t, 1)


def _extend_at_zero(curve, normal_field, t, kn_scale, tg_scale):
    """Continuous extension of tau_g / kappa_n at an isolated zero of kappa_n.

    L'Hopital with finite-difference derivatives up to order 3: the first
    order l with kappa_n^(l) != 0 must have tau_g^(0..l-1) = 0 as well.
    """
    h = 1e-3 * max(curve.length, 1.0)

    def kn(z):
        return normal_field.scalars(z).kappa_n

    def tg(z):
        return normal_field.scalars(z).tau_g

    for order in (1, 2, 3):
        kn_l = float(central_difference(kn, t, order, h))
        scale_l = kn_scale / h**order
        if abs(kn_l) > 1e-4 * scale_l:
            tg_prev = abs(tg(t)) / max(tg_scale, kn_scale)
            for j in range(1, order):
                d = float(central_difference(tg, t, j, h))
                tg_prev = max(tg_prev, abs(d) * h**j / max(tg_scale, kn_scale))
            if tg_prev > 1e-4:
                raise SingularRuling(
                    f"kappa_n vanishes at t={t:.6g} while tau_g (or a lower-order "
                    f"derivative) does not; no flat ribbon exists there"
                )
            tg_l = float(central_difference(tg, t, order, h))
            return -tg_l / kn_l
    if abs(tg(t)) > 1e-6 * max(tg_scale, kn_scale):
        raise SingularRuling(
            f"kappa_n vanishes to high order at t={t:.6g} while tau_g = {tg(t):.3e} does not"
        )
    raise ExtensionOrderExceeded(
        f"ruling-slope extension at t={t:.6g} needs derivatives beyond order 3"
    )


def mu_field(curve, normal_field, grid_size=2001):
    """Sample mu = -tau_g / kappa_n on the grid, extending through kappa_n zeros.

    Nodes where |kappa_n| is small (the direct quotient would amplify
    round-off) take their value from a spline through the well-conditioned
    nodes; if nearly everything is small, the L'Hopital extension is used
    pointwise.  Either way the extension must satisfy the flat-ribbon
    compatibility mu * kappa_n + tau_g = 0, otherwise SingularRuling.
    """
    ts = curve.grid(grid_size)
    kn = np.empty(len(ts))
    tg = np.empty(len(ts))
    for i, t in enumerate(ts):
        sc = normal_field.scalars(t)
        kn[i], tg[i] = sc.kappa_n, sc.tau_g
    kn_scale = max(np.max(np.abs(kn)), 1e-30)
    tg_scale = max(np.max(np.abs(tg)), 1e-30)
    floor = 1e-12 / curve.length
    if kn_scale <= max(floor, 1e-10 * tg_scale):
        # kappa_n vanishes identically at working precision
        if tg_scale <= floor:
            return MuField(ts, np.zeros(len(ts)))  # planar strip, X = H
        raise SingularRuling(
            f"kappa_n vanishes identically while tau_g does not "
            f"(sup |tau_g| = {tg_scale:.3e}); no flat ribbon exists"
        )
    good = np.abs(kn) > 1e-4 * kn_scale
    mu = np.empty(len(ts))
    mu[good] = -tg[good] / kn[good]
    if not np.all(good):
        if np.count_nonzero(good) >= max(4, len(ts) // 2):
            fill = CubicSpline(ts[good], mu[good])
            mu[~good] = fill(ts[~good])
        else:
            for i in np.flatnonzero(~good):
                mu[i] = _extend_at_zero(curve, normal_field, ts[i], kn_scale, tg_scale)
        residual = np.abs(mu[~good] * kn[~good] + tg[~good])
        worst = float(np.max(residual))
        if worst > 1e-6 * max(kn_scale, tg_scale):
            i = int(np.flatnonzero(~good)[int(np.argmax(residual))])
            raise SingularRuling(
                f"kappa_n vanishes near t={ts[i]:.6g} while tau_g does not "
                f"(residual {worst:.3e}); no flat ribbon exists there"
            )
    return MuField(ts, mu)


class FlatRibbon:
    """Flat ribbon sigma(t, u) = gamma(t) + u X(t), X = mu T + H, |u| <= w."""

    def __init__(self, curve, normal_field, w, mu, grid_size=2001):
        self.curve = curve
        self.normal = normal_field
        self.w = float(w)
        self.mu = mu
        self.ts = mu.ts
        kg = np.empty(len(self.ts))
        kn = np.empty(len(self.ts))
        tg = np.empty(len(self.ts))
        for i, t in enumerate(self.ts):
            sc = normal_field.scalars(t)
            kg[i], kn[i], tg[i] = sc.kappa_g, sc.kappa_n, sc.tau_g
        self.kappa_g, self.kappa_n, self.tau_g = kg, kn, tg
        mup = np.array([mu.derivative(t) for t in self.ts])
        self.lam = mup - (1.0 + mu.values**2) * kg
        sup = float(np.max(np.abs(self.lam)))
        self.max_width = np.inf if sup < LAMBDA_FLAT_TOL else WIDTH_SAFETY / sup

    def lambda_at(self, t):
        return self.mu.derivative(t) - (1.0 + self.mu(t) ** 2) * self._kg_at(t)

    def _kg_at(self, t):
        return self.normal.scalars(t).kappa_g

    def ruling(self, t):
        fr = self.normal.frame(t)
        return self.mu(t) * fr.T + fr.H

    def ruling_derivative(self, t):
        fr = self.normal.frame(t)
        Tp = self.curve.derivative(t, 2)
        Np = self.normal.derivative(t)
        Hp = np.cross(Np, fr.T) + np.cross(fr.N, Tp)
        return self.mu.derivative(t) * fr.T + self.mu(t) * Tp + Hp

    def point(self, t, u):
        return self.curve.point(t) + u * self.ruling(t)


def construct_ribbon(curve, normal_field, w, grid_size=2001):
    """Build the flat ribbon of half-width w normal to the field along the curve."""
    mu = mu_field(curve, normal_field, grid_size=grid_size)
    ribbon = FlatRibbon(curve, normal_field, w, mu, grid_size=grid_size)
    if not w < ribbon.max_width:
        raise WidthTooLarge(
            f"half-width {w:.6g} exceeds the regularity bound {ribbon.max_width:.6g}"
        )
    return ribbon


def ruling_angle(ribbon, t):
    """Angle in (0, pi) between the ruling X(t) and the tangent T(t).

    alpha = ArcCot(mu) with mu = -tau_g / kappa_n, so cot(alpha) is the
    continuous extension of mu.
    """
    return float(arccot(ribbon.mu(t)))


def max_regular_width(curve, normal_field, grid_size=2001):
    """Largest safe half-width: 0.9 / sup|lambda|, infinite when lambda == 0."""
    mu = mu_field(curve, normal_field, grid_size=grid_size)
    return FlatRibbon(curve, normal_field, 0.0, mu).max_width


@dataclass(frozen=True)
class RibbonMesh:
    """Quad-grid tessellation of a ribbon; normals are constant along rulings."""

    vertices: np.ndarray  # (n_t, n_u, 3)
    normals: np.ndarray  # (n_t, 3)
    ts: np.ndarray
    us: np.ndarray


def tessellate(ribbon, n_t, n_u):
    if n_t < 2 or n_u < 2:
        raise ValueError("tessellation needs n_t >= 2 and n_u >= 2")
    ts = np.linspace(0.0, ribbon.curve.length, n_t)
    us = np.linspace(-ribbon.w, ribbon.w, n_u)
    vertices = np.empty((n_t, n_u, 3))
    normals = np.empty((n_t, 3))
    for i, t in enumerate(ts):
        base = ribbon.curve.point(t)
        x = ribbon.ruling(t)
        normals[i] = ribbon.normal.value(t)
        for j, u in enumerate(us):
            vertices[i, j] = base + u * x
    return RibbonMesh(vertices, normals, ts, us)


def write_obj(mesh, path):
    """Write the mesh as ASCII Wavefront OBJ (triangles, 1-based indices)."""
    n_t, n_u, _ = mesh.vertices.shape
    lines = []
    for i in range(n_t):
        for j in range(n_u):
            x, y, z = mesh.vertices[i, j]
            lines.append(f"v {x:.17g} {y:.17g} {z:.17g}")
    for i in range(n_t):
        x, y, z = mesh.normals[i]
        lines.append(f"vn {x:.17g} {y:.17g} {z:.17g}")

    def vid(i, j):
        return i * n_u + j + 1

    for i in range(n_t - 1):
        for j in range(n_u - 1):
            a, b = vid(i, j), vid(i + 1, j)
            c, d = vid(i + 1, j + 1), vid(i, j + 1)
            na, nb = i + 1, i + 2
            lines.append(f"f {a}//{na} {b}//{nb} {c}//{nb}")
            lines.append(f"f {a}//{na} {c}//{nb} {d}//{na}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _angle_defect_gauss(mesh):
    """Max |K| over interior vertices via the angle-defect estimator."""
    v = mesh.vertices
    n_t, n_u, _ = v.shape
    worst = 0.0
    for i in range(1, n_t - 1):
        for j in range(1, n_u - 1):
            p = v[i, j]
            ring = [
                v[i + 1, j],
                v[i + 1, j + 1],
                v[i, j + 1],
                v[i - 1, j + 1],
                v[i - 1, j],
                v[i - 1, j - 1],
                v[i, j - 1],
                v[i + 1, j - 1],
            ]
            angle_sum = 0.0
            area = 0.0
            for k in range(8):
                e1 = ring[k] - p
                e2 = ring[(k + 1) % 8] - p
                cr = np.linalg.norm(np.cross(e1, e2))
                angle_sum += np.arctan2(cr, np.dot(e1, e2))
                area += 0.5 * cr
            k_est = (2.0 * np.pi - angle_sum) / (area / 3.0)
            worst = max(worst, abs(k_est))
    return worst


@dataclass(frozen=True)
class FlatnessReport:
    ruling_in_plane: float  # sup |<X, N>|
    tangent_plane: float  # sup |<X x T, X'>|
    gauss_estimate: float
    second_form_f: float  # sup |<X', N>| (zero for a flat ribbon)
    second_form_g: float = 0.0


def flatness_residuals(ribbon, grid_size=201, n_t=200, n_u=8, ruling=None, ruling_derivative=None):
    """Developability residuals of a ribbon (or of an injected ruling field).

    ``ruling``/``ruling_derivative`` override the ribbon's own ruling, which
    lets tests verify that a perturbed ruling is detected as non-flat.
    """
    if ruling is None:
        ruling = ribbon.ruling
        ruling_derivative = ribbon.ruling_derivative
    elif ruling_derivative is None:
        h = 1e-5 * max(ribbon.curve.length, 1.0)
        ruling_derivative = lambda t: central_difference(ruling, t, 1, h)
    ts = np.linspace(0.0, ribbon.curve.length, odd_node_count(grid_size))
    res1 = res2 = res_f = 0.0
    for t in ts:
        x = ruling(t)
        xp = ruling_derivative(t)
        n = ribbon.normal.value(t)
        tangent = ribbon.curve.derivative(t, 1)
        res1 = max(res1, abs(float(np.dot(x, n))))
        res2 = max(res2, abs(float(np.dot(np.cross(x, tangent), xp))))
        res_f = max(res_f, abs(float(np.dot(xp, n))))
    gauss = _angle_defect_gauss(tessellate(ribbon, n_t, n_u))
    return FlatnessReport(res1, res2, gauss, res_f)
