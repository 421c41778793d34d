"""Darboux frames along a curve with respect to a unit normal field.

The frame is (T, H, N) with H = N x T; its derivative is governed by the
scalars (kappa_g, kappa_n, tau_g).  Normal fields are represented by
objects exposing ``value(t)`` and ``derivative(t)``; rotating a field
about the tangent by an angle function produces a new field whose scalars
transform by :func:`rotate`.
"""

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .curves import KAPPA_MIN, frenet_data
from .errors import NonOrthogonalNormal, VanishingCurvature
from .numerics import central_difference, odd_node_count

__all__ = [
    "DarbouxFrame",
    "DarbouxScalars",
    "NormalField",
    "PrincipalNormalField",
    "TorusNormalField",
    "RotationMinimizingField",
    "RotatedNormalField",
    "darboux_scalars",
    "frame_derivative",
    "rotate",
    "rotate_field",
    "frenet_rotation_field",
    "sampled_scalars",
    "isometric_partner_angle",
]


@dataclass(frozen=True)
class DarbouxFrame:
    T: np.ndarray
    H: np.ndarray
    N: np.ndarray


@dataclass(frozen=True)
class DarbouxScalars:
    kappa_g: float
    kappa_n: float
    tau_g: float


class NormalField:
    """A smooth unit vector field normal to the tangent of ``curve``."""

    def __init__(self, curve):
        self.curve = curve

    def value(self, t):
        raise NotImplementedError

    def derivative(self, t):
        raise NotImplementedError

    def frame(self, t):
        T = self.curve.derivative(t, 1)
        N = self.value(t)
        return DarbouxFrame(T, np.cross(N, T), N)

    def scalars(self, t):
        return darboux_scalars(self.curve, self, t)


class PrincipalNormalField(NormalField):
    """N = gamma''/kappa; requires kappa > 0 wherever evaluated."""

    def value(self, t):
        g2 = self.curve.derivative(t, 2)
        kappa = np.linalg.norm(g2)
        if kappa <= KAPPA_MIN:
            raise VanishingCurvature(f"curvature vanishes at t={t:.6g}")
        return g2 / kappa

    def derivative(self, t):
        g2 = self.curve.derivative(t, 2)
        g3 = self.curve.derivative(t, 3)
        kappa = np.linalg.norm(g2)
        if kappa <= KAPPA_MIN:
            raise VanishingCurvature(f"curvature vanishes at t={t:.6g}")
        kappa1 = np.dot(g2, g3) / kappa
        return g3 / kappa - g2 * (kappa1 / kappa**2)


class TorusNormalField(NormalField):
    """Outward unit normal of the torus along a torus-knot curve."""

    def value(self, t):
        return self.curve.surface_normal_raw(self.curve.raw_parameter(t))

    def derivative(self, t):
        phi = self.curve.raw_parameter(t)
        return self.curve.surface_normal_raw_derivative(phi) / self.curve.spec.speed(phi)


class RotationMinimizingField(NormalField):
    """Parallel-transported (rotation-minimizing) reference field.

    Discretized by the double-reflection method on a dense grid and
    interpolated componentwise; the derivative uses the defining relation
    N' = -<T', N> T of a rotation-minimizing frame.
    """

    def __init__(self, curve, seed=None, grid_size=2001):
        super().__init__(curve)
        ts = np.linspace(0.0, curve.length, odd_node_count(grid_size))
        tangents = np.array([curve.derivative(t, 1) for t in ts])
        points = np.array([curve.point(t) for t in ts])
        if seed is None:
            fd = frenet_data(curve, 0.0)
            if fd.principal_normal is not None:
                seed = fd.principal_normal
            else:
                trial = np.array([0.0, 0.0, 1.0])
                if abs(np.dot(trial, tangents[0])) > 0.9:
                    trial = np.array([0.0, 1.0, 0.0])
                seed = trial
        n = np.asarray(seed, dtype=float)
        n = n - np.dot(n, tangents[0]) * tangents[0]
        n /= np.linalg.norm(n)
        normals = np.empty_like(tangents)
        normals[0] = n
        for i in range(len(ts) - 1):
            # double reflection step (Wang et al. 2008)
            v1 = points[i + 1] - points[i]
            c1 = np.dot(v1, v1)
            nL = normals[i] - (2.0 / c1) * np.dot(v1, normals[i]) * v1
            tL = tangents[i] - (2.0 / c1) * np.dot(v1, tangents[i]) * v1
            v2 = tangents[i + 1] - tL
            c2 = np.dot(v2, v2)
            normals[i + 1] = nL - (2.0 / c2) * np.dot(v2, nL) * v2
        self._spline = CubicSpline(ts, normals)

    def value(self, t):
        n = self._spline(t)
        return n / np.linalg.norm(n)

    def derivative(self, t):
        T = self.curve.derivative(t, 1)
        g2 = self.curve.derivative(t, 2)
        return -np.dot(g2, self.value(t)) * T


class RotatedNormalField(NormalField):
    """Base field rotated about the tangent by an angle function theta.

    ``theta`` may be a constant or a callable; ``theta_prime`` defaults to
    zero for constants and to a 4th-order finite difference otherwise.
    """

    def __init__(self, base, theta, theta_prime=None):
        super().__init__(base.curve)
        self.base = base
        if callable(theta):
            self.theta = theta
            if theta_prime is None:
                h = 1e-5 * max(base.curve.length, 1.0)
                theta_prime = lambda t: float(central_difference(theta, t, 1, h))
            self.theta_prime = theta_prime
        else:
            q = float(theta)
            self.theta = lambda t: q
            self.theta_prime = lambda t: 0.0

    def value(self, t):
        th = self.theta(t)
        fr = self.base.frame(t)
        return -np.sin(th) * fr.H + np.cos(th) * fr.N

    def derivative(self, t):
        th = self.theta(t)
        dth = self.theta_prime(t)
        fr = self.base.frame(t)
        Np = self.base.derivative(t)
        Hp = np.cross(Np, fr.T) + np.cross(fr.N, self.curve.derivative(t, 2))
        c, s = np.cos(th), np.sin(th)
        return -dth * c * fr.H - s * Hp - dth * s * fr.N + c * Np


def darboux_scalars(curve, normal_field, t):
    """The scalars (kappa_g, kappa_n, tau_g) of the Darboux frame at t."""
    T = curve.derivative(t, 1)
    Tp = curve.derivative(t, 2)
    N = normal_field.value(t)
    if abs(np.dot(N, T)) > 1e-8:
        raise NonOrthogonalNormal(f"<N, T> = {np.dot(N, T):.3e} at t={t:.6g}")
    Np = normal_field.derivative(t)
    H = np.cross(N, T)
    Hp = np.cross(Np, T) + np.cross(N, Tp)
    return DarbouxScalars(
        kappa_g=float(np.dot(Tp, H)),
        kappa_n=float(np.dot(Tp, N)),
        tau_g=float(np.dot(Hp, N)),
    )


def frame_derivative(frame, scalars):
    """(T', H', N') from the skew derivative relations of the Darboux frame."""
    kg, kn, tg = scalars.kappa_g, scalars.kappa_n, scalars.tau_g
    Tp = kg * frame.H + kn * frame.N
    Hp = -kg * frame.T + tg * frame.N
    Np = -kn * frame.T - tg * frame.H
    return Tp, Hp, Np


def rotate(scalars, theta, theta_prime=0.0):
    """Scalars with respect to the field rotated by theta (derivative theta_prime)."""
    c, s = np.cos(theta), np.sin(theta)
    return DarbouxScalars(
        kappa_g=scalars.kappa_g * c + scalars.kappa_n * s,
        kappa_n=-scalars.kappa_g * s + scalars.kappa_n * c,
        tau_g=theta_prime + scalars.tau_g,
    )


def rotate_field(normal_field, theta, theta_prime=None):
    """Rotate a normal field about the tangent by the angle function theta."""
    return RotatedNormalField(normal_field, theta, theta_prime)


def frenet_rotation_field(curve, x, grid_size=201):
    """Principal normal rotated by the constant angle x.

    The resulting field has tau_g equal to the Frenet torsion and normal
    curvature kappa * cos(x); requires kappa > 0 along the whole curve.
    """
    for t in curve.grid(grid_size):
        if np.linalg.norm(curve.derivative(t, 2)) <= KAPPA_MIN:
            raise VanishingCurvature(f"curvature vanishes near t={t:.6g}")
    return RotatedNormalField(PrincipalNormalField(curve), float(x))


def sampled_scalars(normal_field, grid_size=2001):
    """Spline-backed t -> DarbouxScalars evaluator.

    Sampling once and interpolating makes ODE right-hand sides cheap; the
    interpolation error is O(h^4) on the uniform grid.
    """
    ts = normal_field.curve.grid(grid_size)
    data = np.empty((len(ts), 3))
    for i, t in enumerate(ts):
        sc = normal_field.scalars(t)
        data[i] = (sc.kappa_g, sc.kappa_n, sc.tau_g)
    spline = CubicSpline(ts, data)

    def evaluate(t):
        kg, kn, tg = spline(t)
        return DarbouxScalars(float(kg), float(kn), float(tg))

    return evaluate


def isometric_partner_angle(scalars):
    """Constant rotation angle whose field preserves the geodesic curvature."""
    kappa = np.hypot(scalars.kappa_g, scalars.kappa_n)
    if kappa <= KAPPA_MIN:
        raise VanishingCurvature("kappa_g and kappa_n both vanish")
    return np.pi - 2.0 * np.arctan2(scalars.kappa_g, scalars.kappa_n)
