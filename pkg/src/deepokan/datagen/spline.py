"""Natural cubic spline interpolation.

Built on the second-derivative formulation: the interior moments solve a
tridiagonal system (Thomas algorithm) with zero end moments, giving a C2
interpolant that is linear beyond machine noise when only two knots exist.
"""

from __future__ import annotations

import numpy as np


def thomas_solve(lower: np.ndarray, diag: np.ndarray, upper: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve a tridiagonal system by forward elimination and back substitution.

    ``lower[i]`` multiplies x[i-1] in row i (lower[0] unused); ``upper[i]``
    multiplies x[i+1] (upper[-1] unused).
    """
    n = diag.size
    c = np.empty(n)
    d = np.empty(n)
    c[0] = upper[0] / diag[0]
    d[0] = rhs[0] / diag[0]
    for i in range(1, n):
        denom = diag[i] - lower[i] * c[i - 1]
        if denom == 0.0:
            raise ValueError("tridiagonal system is singular")
        c[i] = upper[i] / denom if i < n - 1 else 0.0
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / denom
    x = np.empty(n)
    x[-1] = d[-1]
    for i in range(n - 2, -1, -1):
        x[i] = d[i] - c[i] * x[i + 1]
    return x


class NaturalCubicSpline:
    """Evaluable natural cubic spline through the given knots."""

    def __init__(self, knots: np.ndarray, values: np.ndarray, moments: np.ndarray):
        self.knots = knots
        self.values = values
        self.moments = moments  # second derivatives at the knots

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        # Points outside the knot range continue the end-interval cubics.
        idx = np.clip(np.searchsorted(self.knots, t, side="right") - 1, 0, self.knots.size - 2)
        t0, t1 = self.knots[idx], self.knots[idx + 1]
        v0, v1 = self.values[idx], self.values[idx + 1]
        m0, m1 = self.moments[idx], self.moments[idx + 1]
        h = t1 - t0
        a, b = t1 - t, t - t0
        return (
            m0 * a**3 / (6 * h)
            + m1 * b**3 / (6 * h)
            + (v0 / h - m0 * h / 6) * a
            + (v1 / h - m1 * h / 6) * b
        )

    def second_derivative(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        idx = np.clip(np.searchsorted(self.knots, t, side="right") - 1, 0, self.knots.size - 2)
        h = self.knots[idx + 1] - self.knots[idx]
        return (
            self.moments[idx] * (self.knots[idx + 1] - t) / h
            + self.moments[idx + 1] * (t - self.knots[idx]) / h
        )


def natural_cubic_spline(points) -> NaturalCubicSpline:
    """Interpolate (t, v) pairs; knots must be strictly increasing."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be a sequence of (t, v) pairs")
    if pts.shape[0] < 2:
        raise ValueError("need at least 2 points")
    knots, values = pts[:, 0], pts[:, 1]
    h = np.diff(knots)
    if np.any(h <= 0):
        raise ValueError("knots must be strictly increasing")
    k = knots.size
    moments = np.zeros(k)
    if k > 2:
        # Interior rows of the moment system; natural ends pin M[0] = M[-1] = 0.
        lower = h[:-1] / 6
        diag = (h[:-1] + h[1:]) / 3
        upper = h[1:] / 6
        rhs = np.diff(values[1:]) / h[1:] - np.diff(values[:-1]) / h[:-1]
        lower = lower.copy()
        upper = upper.copy()
        lower[0] = 0.0
        upper[-1] = 0.0
        moments[1:-1] = thomas_solve(lower, diag, upper, rhs)
    return NaturalCubicSpline(knots, values, moments)
