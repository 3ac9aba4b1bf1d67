"""Shared test helpers: finite-difference gradient checking."""

import numpy as np

FD_EPS = 1e-6


def central_diff(fn, x: np.ndarray, eps: float = FD_EPS) -> np.ndarray:
    """Central finite-difference gradient of a scalar function of an array."""
    x = np.asarray(x, dtype=np.float64)
    grad = np.zeros_like(x)
    flat = grad.ravel()
    xf = x.ravel()
    for i in range(xf.size):
        orig = xf[i]
        xf[i] = orig + eps
        up = fn(x)
        xf[i] = orig - eps
        down = fn(x)
        xf[i] = orig
        flat[i] = (up - down) / (2 * eps)
    return grad


def assert_grad_close(analytic: np.ndarray, numeric: np.ndarray, rel: float = 1e-6):
    """Mixed relative/absolute comparison suited to FD noise near zero."""
    analytic = np.asarray(analytic, dtype=np.float64)
    numeric = np.asarray(numeric, dtype=np.float64)
    assert analytic.shape == numeric.shape
    scale = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-3)
    worst = np.max(np.abs(analytic - numeric) / scale)
    assert worst < rel, f"gradient mismatch: worst relative error {worst:.3e}"
