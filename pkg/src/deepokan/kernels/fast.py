"""Numba-compiled hot kernels.

Same contracts as :mod:`deepokan.kernels.reference`; fused loops avoid the
(batch, n, m) temporaries of the numpy path. ``fastmath`` is deliberately
off so results stay reproducible run to run.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def rbf_forward(x, centers, beta):
    b, n = x.shape
    m = centers.shape[0]
    out = np.empty((b, n * m))
    inv_beta = 1.0 / beta
    for s in range(b):
        for i in range(n):
            xi = x[s, i]
            base = i * m
            for j in range(m):
                z = (xi - centers[j]) * inv_beta
                out[s, base + j] = np.exp(-z * z)
    return out


@njit(cache=True)
def rbf_backward(x, centers, beta, feats, d_feats):
    b, n = x.shape
    m = centers.shape[0]
    dx = np.zeros((b, n))
    d_centers = np.zeros(m)
    scale = -2.0 / (beta * beta)
    for s in range(b):
        for i in range(n):
            xi = x[s, i]
            base = i * m
            acc = 0.0
            for j in range(m):
                k = base + j
                w = d_feats[s, k] * feats[s, k] * scale * (xi - centers[j])
                acc += w
                d_centers[j] -= w
            dx[s, i] = acc
    return dx, d_centers


@njit(cache=True)
def wave_family(coeffs, xs):
    s_count = coeffs.shape[0]
    p_count = xs.shape[0]
    out = np.empty((s_count, p_count))
    for s in range(s_count):
        c1 = coeffs[s, 0] * np.pi
        c2 = coeffs[s, 1] * np.pi
        c3 = coeffs[s, 2] * np.pi
        for p in range(p_count):
            x = xs[p]
            x2 = x * x
            x3 = x2 * x
            out[s, p] = np.cos(c1 * x) - np.sin(c2 * x2) * np.cos(c3 * x3)
    return out
