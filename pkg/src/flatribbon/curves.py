"""Smooth space curves, arc-length reparametrization, and example curves.

A curve enters the package as a :class:`CurveSpec` (position map plus
derivative evaluators on an arbitrary parameter interval) and is used
everywhere else as an :class:`ArcLengthCurve`, whose parameter is arc
length on [0, L].  The reparametrized curve is unit-speed to machine
precision by construction: derivatives with respect to arc length are
obtained from the raw derivatives by the chain rule, with dx/ds = 1/|c'|.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline, PchipInterpolator

from .errors import InvalidParams, NonRegularCurve, ToleranceNotMet
from .numerics import central_difference, cumulative_simpson_uniform, odd_node_count, simpson_uniform

KAPPA_MIN = 1e-9  # below this curvature the Frenet normal/torsion are reported absent

__all__ = [
    "CurveSpec",
    "ArcLengthCurve",
    "FrenetData",
    "HelixParams",
    "TorusKnotParams",
    "arc_length_reparametrize",
    "frenet_data",
    "make_helix",
    "make_torus_knot",
    "curve_from_samples",
    "is_locally_nonplanar",
]


class CurveSpec:
    """A regular space curve on a raw parameter interval.

    Parameters
    ----------
    position : callable
        Map x -> point in R^3 (array of shape (3,)).
    domain : (float, float)
        Parameter interval [x0, x1].
    derivatives : sequence of callables, optional
        Analytic derivative evaluators of orders 1..3.  Missing orders
        fall back to 4th-order central differences of ``position``.
    fd_step : float, optional
        Step for the finite-difference fallback; defaults to 1e-4 times
        the domain length.
    """

    def __init__(self, position, domain, derivatives=None, fd_step=None, name="curve"):
        self.position = position
        self.domain = (float(domain[0]), float(domain[1]))
        if self.domain[1] <= self.domain[0]:
            raise InvalidParams("curve domain must have positive length")
        self._derivatives = tuple(derivatives) if derivatives else ()
        self.fd_step = fd_step if fd_step else 1e-4 * (self.domain[1] - self.domain[0])
        self.name = name

    def point(self, x):
        return np.asarray(self.position(x), dtype=float)

    def derivative(self, x, order=1):
        if not 1 <= order <= 3:
            raise ValueError("derivative order must be 1, 2, or 3")
        if order <= len(self._derivatives):
            return np.asarray(self._derivatives[order - 1](x), dtype=float)
        return central_difference(self.point, x, order, self.fd_step)

    def speed(self, x):
        return float(np.linalg.norm(self.derivative(x, 1)))


@dataclass(frozen=True)
class FrenetData:
    """Frenet data at a single arc-length parameter.

    ``principal_normal``, ``binormal``, and ``tau`` are None at points of
    (near-)vanishing curvature.
    """

    tangent: np.ndarray
    kappa: float
    tau: float | None
    principal_normal: np.ndarray | None
    binormal: np.ndarray | None


class ArcLengthCurve:
    """A curve parametrized by arc length on [0, L].

    Wraps a :class:`CurveSpec` together with the monotone map between raw
    parameter and arc length.  When the spec is already unit-speed the map
    is the identity and evaluation is exact.
    """

    def __init__(self, spec, length, raw_nodes=None, s_table=None):
        self.spec = spec
        self.length = float(length)
        self._identity = raw_nodes is None
        if not self._identity:
            self._raw_nodes = np.asarray(raw_nodes, dtype=float)
            self._s_table = np.asarray(s_table, dtype=float)
            # monotone first guess for the inverse, Newton-refined on call
            self._raw_of_s = PchipInterpolator(self._s_table, self._raw_nodes)
            self._s_of_raw = CubicSpline(self._raw_nodes, self._s_table)
        self.grid_size = 0 if self._identity else len(self._raw_nodes)

    @classmethod
    def from_unit_speed(cls, spec):
        return cls(spec, spec.domain[1] - spec.domain[0])

    def raw_parameter(self, t):
        """Raw parameter x such that arc length from x0 to x equals t."""
        if self._identity:
            return self.spec.domain[0] + t
        x = float(self._raw_of_s(np.clip(t, 0.0, self.length)))
        lo, hi = self.spec.domain
        for _ in range(3):
            x -= (float(self._s_of_raw(x)) - t) / self.spec.speed(x)
            x = min(max(x, lo), hi)
        return x

    def point(self, t):
        return self.spec.point(self.raw_parameter(t))

    def derivative(self, t, order=1):
        """Derivative of gamma with respect to arc length, order 1..3."""
        x = self.raw_parameter(t)
        if self._identity:
            return self.spec.derivative(x, order)
        c1 = self.spec.derivative(x, 1)
        v = np.linalg.norm(c1)
        x1 = 1.0 / v
        if order == 1:
            return c1 * x1
        c2 = self.spec.derivative(x, 2)
        v1 = np.dot(c1, c2) / v
        x2 = -v1 / v**3
        if order == 2:
            return c2 * x1**2 + c1 * x2
        c3 = self.spec.derivative(x, 3)
        v2 = (np.dot(c2, c2) + np.dot(c1, c3) - v1**2) / v
        x3 = (3.0 * v1**2 - v * v2) / v**5
        return c3 * x1**3 + 3.0 * c2 * x1 * x2 + c1 * x3

    def grid(self, n):
        """Uniform arc-length grid with an odd number of nodes >= n."""
        return np.linspace(0.0, self.length, odd_node_count(n))


def arc_length_reparametrize(curve, grid_size=1001, tol=1e-8):
    """Reparametrize a raw curve by arc length.

    The arc-length table is built with cumulative Simpson on ``grid_size``
    nodes (rounded up to odd); the total-length error is estimated by
    Richardson extrapolation against the half-resolution table and must
    not exceed ``tol``.
    """
    n = odd_node_count(grid_size)
    x0, x1 = curve.domain
    nodes = np.linspace(x0, x1, n)
    speeds = np.array([curve.speed(x) for x in nodes])
    if speeds.min() < 1e-12:
        bad = nodes[int(np.argmin(speeds))]
        raise NonRegularCurve(f"curve speed vanishes near parameter {bad:.6g}")
    s_table = cumulative_simpson_uniform(speeds, nodes[1] - nodes[0])
    length = s_table[-1]
    coarse = simpson_uniform(speeds[::2], 2.0 * (nodes[1] - nodes[0]))
    err = abs(length - coarse) / 15.0
    if err > tol:
        raise ToleranceNotMet(
            f"arc-length error estimate {err:.3e} exceeds tol {tol:.3e}; increase grid_size"
        )
    return ArcLengthCurve(curve, length, raw_nodes=nodes, s_table=s_table)


def frenet_data(curve, t):
    """Tangent, curvature, torsion, and Frenet normals at arc length t."""
    g1 = curve.derivative(t, 1)
    g2 = curve.derivative(t, 2)
    kappa = float(np.linalg.norm(g2))
    if kappa <= KAPPA_MIN:
        return FrenetData(g1, kappa, None, None, None)
    g3 = curve.derivative(t, 3)
    pn = g2 / kappa
    bn = np.cross(g1, pn)
    tau = float(np.dot(np.cross(g1, g2), g3)) / kappa**2
    return FrenetData(g1, kappa, tau, pn, bn)


@dataclass(frozen=True)
class HelixParams:
    """Circular helix of radius a and pitch 2*pi*b.

    ``length`` is the arc length of the sampled piece; the default covers
    one full turn of the major angle.
    """

    a: float
    b: float
    length: float | None = None

    def arc_length(self):
        if self.length is not None:
            return float(self.length)
        return 2.0 * np.pi * np.hypot(self.a, self.b)


def make_helix(params):
    """Arc-length-parametrized circular helix (the parametrization is exact)."""
    a, b = float(params.a), float(params.b)
    if a <= 0.0:
        raise InvalidParams("helix radius a must be positive")
    if b < 0.0:
        raise InvalidParams("helix reduced pitch b must be nonnegative")
    m = np.hypot(a, b)
    L = params.arc_length()

    def pos(t):
        return np.array([a * np.cos(t / m), a * np.sin(t / m), b * t / m])

    def d1(t):
        return np.array([-a / m * np.sin(t / m), a / m * np.cos(t / m), b / m])

    def d2(t):
        return np.array([-a / m**2 * np.cos(t / m), -a / m**2 * np.sin(t / m), 0.0])

    def d3(t):
        return np.array([a / m**3 * np.sin(t / m), -a / m**3 * np.cos(t / m), 0.0])

    spec = CurveSpec(pos, (0.0, L), derivatives=(d1, d2, d3), name=f"helix(a={a}, b={b})")
    return ArcLengthCurve.from_unit_speed(spec)


@dataclass(frozen=True)
class TorusKnotParams:
    """Curve on the torus of radii (R, rho) winding n times in the minor angle."""

    R: float = 2.0
    rho: float = 1.0
    n: int = 3
    grid_size: int = 4001
    tol: float = 1e-8


class TorusKnotCurve(ArcLengthCurve):
    """Arc-length torus knot that also knows the outward torus normal."""

    def __init__(self, spec, length, raw_nodes, s_table, params):
        super().__init__(spec, length, raw_nodes=raw_nodes, s_table=s_table)
        self.params = params

    def surface_normal_raw(self, phi):
        n = self.params.n
        cn, sn = np.cos(n * phi), np.sin(n * phi)
        return np.array([cn * np.cos(phi), cn * np.sin(phi), sn])

    def surface_normal_raw_derivative(self, phi):
        n = self.params.n
        cn, sn = np.cos(n * phi), np.sin(n * phi)
        return np.array(
            [
                -n * sn * np.cos(phi) - cn * np.sin(phi),
                -n * sn * np.sin(phi) + cn * np.cos(phi),
                n * cn,
            ]
        )


def make_torus_knot(params=TorusKnotParams()):
    """Trivial torus knot c(phi) = ((R + rho cos n phi) cos phi, ..., rho sin n phi)."""
    R, rho, n = float(params.R), float(params.rho), int(params.n)
    if not 0.0 < rho < R:
        raise InvalidParams("torus knot needs 0 < rho < R")

    def radial(phi):
        return R + rho * np.cos(n * phi), -rho * n * np.sin(n * phi)

    def pos(phi):
        r = R + rho * np.cos(n * phi)
        return np.array([r * np.cos(phi), r * np.sin(phi), rho * np.sin(n * phi)])

    def d1(phi):
        r, r1 = radial(phi)
        c, s = np.cos(phi), np.sin(phi)
        return np.array([r1 * c - r * s, r1 * s + r * c, rho * n * np.cos(n * phi)])

    def d2(phi):
        r, r1 = radial(phi)
        r2 = -rho * n**2 * np.cos(n * phi)
        c, s = np.cos(phi), np.sin(phi)
        return np.array(
            [r2 * c - 2 * r1 * s - r * c, r2 * s + 2 * r1 * c - r * s, -rho * n**2 * np.sin(n * phi)]
        )

    def d3(phi):
        r, r1 = radial(phi)
        r2 = -rho * n**2 * np.cos(n * phi)
        r3 = rho * n**3 * np.sin(n * phi)
        c, s = np.cos(phi), np.sin(phi)
        return np.array(
            [
                r3 * c - 3 * r2 * s - 3 * r1 * c + r * s,
                r3 * s + 3 * r2 * c - 3 * r1 * s - r * c,
                -rho * n**3 * np.cos(n * phi),
            ]
        )

    spec = CurveSpec(
        pos, (0.0, 2.0 * np.pi), derivatives=(d1, d2, d3), name=f"torus_knot({R}, {rho}, {n})"
    )
    plain = arc_length_reparametrize(spec, grid_size=params.grid_size, tol=params.tol)
    return TorusKnotCurve(spec, plain.length, plain._raw_nodes, plain._s_table, params)


def curve_from_samples(ts, points, grid_size=1001, tol=1e-8, name="samples"):
    """Cubic-spline curve through (t, x, y, z) samples, arc-length reparametrized."""
    ts = np.asarray(ts, dtype=float)
    points = np.asarray(points, dtype=float)
    if points.shape != (len(ts), 3):
        raise InvalidParams("samples must be rows (t, x, y, z)")
    spline = CubicSpline(ts, points)
    spec = CurveSpec(
        lambda x: spline(x),
        (ts[0], ts[-1]),
        derivatives=(lambda x: spline(x, 1), lambda x: spline(x, 2), lambda x: spline(x, 3)),
        name=name,
    )
    return arc_length_reparametrize(spec, grid_size=grid_size, tol=tol)


@dataclass(frozen=True)
class NonplanarityReport:
    nonplanar: bool
    witness: tuple[float, float] | None = None


def is_locally_nonplanar(curve, grid_size=1001, tol=1e-10):
    """Grid scan for subintervals where the curve is planar.

    A node is flagged when the curvature is below ``tol`` (straight) or the
    torsion is below ``tol`` (locally planar); a run of >= 3 consecutive
    flagged nodes yields a witness interval and a negative verdict.  An
    isolated zero below grid resolution cannot be distinguished from a
    short vanishing run; refine the grid if in doubt.
    """
    ts = curve.grid(grid_size)
    flagged = np.empty(len(ts), dtype=bool)
    for i, t in enumerate(ts):
        fd = frenet_data(curve, t)
        flagged[i] = fd.kappa <= tol or (fd.tau is not None and abs(fd.tau) <= tol)
    run_start = None
    for i, bad in enumerate(flagged):
        if bad:
            if run_start is None:
                run_start = i
            if i - run_start >= 2:
                # extend the witness to the full flagged run
                j = i
                while j + 1 < len(ts) and flagged[j + 1]:
                    j += 1
                return NonplanarityReport(False, (float(ts[run_start]), float(ts[j])))
        else:
            run_start = None
    return NonplanarityReport(True)
