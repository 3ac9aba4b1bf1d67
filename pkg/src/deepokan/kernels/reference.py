"""Pure-numpy implementations of the hot kernels.

These are the semantic reference: the numba backend in
:mod:`deepokan.kernels.fast` must agree with these to floating-point
round-off (the two may differ in summation order, never in formula).

Feature layout is input-major throughout: column ``i * m + j`` of a feature
matrix holds the response of input coordinate ``i`` to grid center ``j``.
"""

import numpy as np


def rbf_forward(x: np.ndarray, centers: np.ndarray, beta: float) -> np.ndarray:
    """Gaussian RBF features exp(-((x_i - g_j) / beta)^2).

    x: (batch, n), centers: (m,) -> features (batch, n * m).
    """
    b, n = x.shape
    m = centers.shape[0]
    z = (x[:, :, None] - centers[None, None, :]) / beta
    return np.exp(-z * z).reshape(b, n * m)


def rbf_backward(
    x: np.ndarray,
    centers: np.ndarray,
    beta: float,
    feats: np.ndarray,
    d_feats: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Backward pass through ``rbf_forward``.

    Given ``d_feats`` = dL/dfeatures (batch, n * m) and the cached forward
    features, returns ``(dx, d_centers)`` where dx has shape (batch, n) and
    d_centers shape (m,). Uses dR/dx = -2 (x - g) / beta^2 * R and the sign
    symmetry dR/dg = -dR/dx.
    """
    b, n = x.shape
    m = centers.shape[0]
    diff = x[:, :, None] - centers[None, None, :]
    w = d_feats.reshape(b, n, m) * feats.reshape(b, n, m) * (-2.0 / (beta * beta)) * diff
    dx = w.sum(axis=2)
    d_centers = -w.sum(axis=(0, 1))
    return dx, d_centers


def wave_family(coeffs: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Parametric wave targets cos(c1 pi x) - sin(c2 pi x^2) cos(c3 pi x^3).

    coeffs: (samples, 3), xs: (points,) -> values (samples, points).
    """
    c1 = coeffs[:, 0:1]
    c2 = coeffs[:, 1:2]
    c3 = coeffs[:, 2:3]
    x = xs[None, :]
    x2 = x * x
    x3 = x2 * x
    return np.cos(c1 * np.pi * x) - np.sin(c2 * np.pi * x2) * np.cos(c3 * np.pi * x3)
