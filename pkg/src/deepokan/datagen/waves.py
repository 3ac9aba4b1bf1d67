"""Analytic 1D wave targets.

Two fixed benchmark waves for pointwise regression and a three-coefficient
wave family for operator learning. The family evaluation is a hot loop over
(samples x points) and runs through the kernels backend.
"""

from __future__ import annotations

import numpy as np

from .. import kernels
from ..rng import make_rng
from .dataset import Dataset, split_dataset

WAVE1_RANGE = (-2.0, 2.0)
WAVE2_RANGE = (-3.0, 3.0)


def wave1(xs: np.ndarray) -> np.ndarray:
    """sin(2*pi*x) + cos(pi*x^2) + cos(pi*x^3)*sin(pi*x^3)."""
    xs = np.asarray(xs, dtype=np.float64)
    return np.sin(2 * np.pi * xs) + np.cos(np.pi * xs**2) + np.cos(np.pi * xs**3) * np.sin(np.pi * xs**3)


def wave2(xs: np.ndarray) -> np.ndarray:
    """cos(4*pi*x) - sin(pi*x^2)*cos(pi*x^3); oscillates harder than wave 1."""
    xs = np.asarray(xs, dtype=np.float64)
    return np.cos(4 * np.pi * xs) - np.sin(np.pi * xs**2) * np.cos(np.pi * xs**3)


def gen_wave1(n: int) -> tuple[np.ndarray, np.ndarray]:
    """n evenly spaced points on [-2, 2] with the first wave's values."""
    if n < 2:
        raise ValueError("need at least 2 points")
    xs = np.linspace(*WAVE1_RANGE, n)
    return xs, wave1(xs)


def gen_wave2(n: int) -> tuple[np.ndarray, np.ndarray]:
    """n evenly spaced points on [-3, 3] with the second wave's values."""
    if n < 2:
        raise ValueError("need at least 2 points")
    xs = np.linspace(*WAVE2_RANGE, n)
    return xs, wave2(xs)


def wave_regression_dataset(xs: np.ndarray, ys: np.ndarray) -> Dataset:
    """Wrap (x, y) pairs as a pointwise dataset with every point in training."""
    xs = np.asarray(xs, dtype=np.float64)
    ds = Dataset(branch_inputs=xs[:, None], targets=ys[:, None])
    ds.train_idx = np.arange(xs.shape[0])
    ds.test_idx = np.arange(0)
    return ds


def gen_wave_operator_dataset(num_samples: int, num_points: int, seed: int = 0) -> Dataset:
    """Wave-family samples y(x; c) = cos(c1*pi*x) - sin(c2*pi*x^2)*cos(c3*pi*x^3).

    Each sample's coefficients c ~ U[-1, 1]^3 come from its own RNG stream,
    the x grid is shared over [-3, 3], and an 80/20 split is applied.
    """
    if num_samples < 2 or num_points < 2:
        raise ValueError("need at least 2 samples and 2 points")
    coeffs = np.empty((num_samples, 3))
    for i in range(num_samples):
        coeffs[i] = make_rng(seed, stream=i).uniform(-1.0, 1.0, size=3)
    xs = np.linspace(*WAVE2_RANGE, num_points)
    targets = kernels.wave_family(coeffs, xs)
    ds = Dataset(branch_inputs=coeffs, targets=targets, coords=xs[:, None])
    return split_dataset(ds, 0.8, seed)
