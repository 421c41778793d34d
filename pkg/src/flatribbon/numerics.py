"""Shared numerical helpers: quadrature, finite differences, ArcCot.

All t-integrals in the package run through composite Simpson on uniform
grids (odd node count), so every module sees the same O(h^4) accuracy.
"""

import numpy as np
from scipy.integrate import cumulative_simpson

__all__ = [
    "arccot",
    "simpson_uniform",
    "cumulative_simpson_uniform",
    "central_difference",
    "odd_node_count",
]


def arccot(x):
    """Inverse cotangent with range (0, pi), continuous across x = 0."""
    return np.arctan2(1.0, x)


def odd_node_count(n):
    """Smallest odd integer >= max(n, 3); Simpson needs an even panel count."""
    n = max(int(n), 3)
    return n if n % 2 == 1 else n + 1


def simpson_uniform(values, h):
    """Composite Simpson rule on a uniform grid with an odd number of nodes.

    Parameters
    ----------
    values : array_like
        Samples f(x_0), ..., f(x_{n-1}) with n odd.
    h : float
        Grid spacing.
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    if n < 3 or n % 2 == 0:
        raise ValueError(f"Simpson rule needs an odd number of nodes >= 3, got {n}")
    weights = np.ones(n)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    return float(h / 3.0 * np.dot(weights, values))


def cumulative_simpson_uniform(values, h):
    """Cumulative integral on a uniform grid; result[0] = 0, same length as input."""
    values = np.asarray(values, dtype=float)
    return cumulative_simpson(values, dx=h, initial=0.0)


# 4th-order central stencils: {order: (offsets, coefficients, h exponent)}.
_STENCILS = {
    1: (np.array([-2, -1, 1, 2]), np.array([1.0, -8.0, 8.0, -1.0]) / 12.0),
    2: (np.array([-2, -1, 0, 1, 2]), np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0),
    3: (np.array([-3, -2, -1, 1, 2, 3]), np.array([1.0, -8.0, 13.0, -13.0, 8.0, -1.0]) / 8.0),
}


def central_difference(f, x, order, h):
    """4th-order-accurate central finite difference of f at x.

    f may return scalars or arrays; order must be 1, 2, or 3.
    """
    if order not in _STENCILS:
        raise ValueError(f"unsupported derivative order {order}")
    offsets, coeffs = _STENCILS[order]
    acc = None
    for k, c in zip(offsets, coeffs):
        term = c * np.asarray(f(x + k * h), dtype=float)
        acc = term if acc is None else acc + term
    return acc / h**order
