"""Gaussian-RBF Kolmogorov-Arnold layers and networks.

A layer maps an input vector x (length n) to an output vector (length o) in
two steps: every coordinate x_i is expanded into m Gaussian features
exp(-((x_i - g_j) / beta)^2) over a shared grid of centers g_j, and the
resulting n*m feature vector is mixed by a learnable (o, n*m) weight matrix.
There is no bias, no residual branch and no extra nonlinearity; stacking
layers composes these maps.

Both the forward pass and the exact analytic backward pass (weight, input
and optional center gradients) are implemented here; the feature kernels
live in :mod:`deepokan.kernels`.

Feature layout is input-major: feature column ``i * m + j`` belongs to input
coordinate i and center j, and weight-matrix columns follow the same order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .rng import make_rng


@dataclass
class RbfGrid:
    """Shared RBF center grid of one layer.

    ``uniform`` is the standard constructor: m evenly spaced centers with
    beta locked to the grid spacing. Direct construction with arbitrary
    centers and beta is allowed for testing and for learnable grids whose
    centers have moved.
    """

    centers: np.ndarray
    beta: float
    learnable: bool = False

    def __post_init__(self):
        self.centers = np.atleast_1d(np.asarray(self.centers, dtype=np.float64))
        if self.centers.ndim != 1 or self.centers.size < 1:
            raise ValueError("centers must be a non-empty 1-D array")
        if not np.all(np.isfinite(self.centers)):
            raise ValueError("centers must be finite")
        if not (np.isfinite(self.beta) and self.beta > 0):
            raise ValueError("beta must be positive and finite")

    @classmethod
    def uniform(cls, g_min: float, g_max: float, m: int, learnable: bool = False) -> "RbfGrid":
        """m evenly spaced centers on [g_min, g_max], beta = spacing."""
        if m < 2:
            raise ValueError("uniform grid needs m >= 2")
        if not g_max > g_min:
            raise ValueError("g_max must exceed g_min")
        beta = (g_max - g_min) / (m - 1)
        return cls(centers=np.linspace(g_min, g_max, m), beta=beta, learnable=learnable)

    @property
    def m(self) -> int:
        return self.centers.shape[0]

    @property
    def g_min(self) -> float:
        return float(self.centers.min())

    @property
    def g_max(self) -> float:
        return float(self.centers.max())


def _as_batch(x, dim: int, what: str) -> tuple[np.ndarray, bool]:
    """Coerce x to a (batch, dim) float array; report whether it was a vector."""
    arr = np.asarray(x, dtype=np.float64)
    squeeze = arr.ndim == 1
    if squeeze:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise ValueError(f"{what}: expected trailing dimension {dim}, got shape {np.asarray(x).shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what}: non-finite input values are not allowed")
    return np.ascontiguousarray(arr), squeeze


def rbf_features(x, grid: RbfGrid) -> np.ndarray:
    """Feature expansion of x under ``grid``; (n,) -> (n*m,) or (B, n) -> (B, n*m)."""
    arr = np.asarray(x, dtype=np.float64)
    batch, squeeze = _as_batch(x, arr.shape[-1], "rbf_features")
    feats = kernels.rbf_forward(batch, grid.centers, grid.beta)
    return feats[0] if squeeze else feats


class KanLayer:
    """One RBF-KAN layer: feature expansion followed by linear mixing."""

    def __init__(
        self,
        in_dim: int,
        out_dim: int,
        grid: RbfGrid,
        weights: np.ndarray | None = None,
        rng: np.random.Generator | None = None,
    ):
        if in_dim < 1 or out_dim < 1:
            raise ValueError("layer dimensions must be positive")
        self.in_dim = in_dim
        self.out_dim = out_dim
        self.grid = grid
        n_cols = in_dim * grid.m
        if weights is None:
            # fan-in scaling keeps pre-activations O(1); paper leaves init open
            scale = np.sqrt(1.0 / n_cols)
            rng = rng if rng is not None else make_rng(0)
            weights = rng.uniform(-scale, scale, size=(out_dim, n_cols))
        weights = np.asarray(weights, dtype=np.float64)
        if weights.shape != (out_dim, n_cols):
            raise ValueError(f"weights must have shape {(out_dim, n_cols)}, got {weights.shape}")
        self.weights = weights

    def features(self, batch: np.ndarray) -> np.ndarray:
        return kernels.rbf_forward(batch, self.grid.centers, self.grid.beta)

    def forward(self, x) -> np.ndarray:
        batch, squeeze = _as_batch(x, self.in_dim, "kan layer input")
        out = self.features(batch) @ self.weights.T
        return out[0] if squeeze else out

    def param_count(self) -> int:
        count = self.out_dim * self.in_dim * self.grid.m
        if self.grid.learnable:
            count += self.grid.m
        return count


class KanGradients:
    """Gradients congruent with a KanNetwork: per-layer dW, optional per-layer dG.

    ``centers`` is None when no grid is learnable; otherwise it is a per-layer
    list whose entries are None for layers with fixed grids.
    """

    def __init__(self, weights: list[np.ndarray], centers: list[np.ndarray | None] | None):
        self.weights = weights
        self.centers = centers

    def arrays(self) -> list[np.ndarray]:
        """Flat list aligned with ``KanNetwork.params()``."""
        if self.centers is None:
            return list(self.weights)
        out = []
        for dw, dg in zip(self.weights, self.centers):
            out.append(dw)
            if dg is not None:
                out.append(dg)
        return out


class KanNetwork:
    """Composition of KAN layers with cached-tape forward and analytic backward."""

    def __init__(self, layers: list[KanLayer]):
        for a, b in zip(layers, layers[1:]):
            if a.out_dim != b.in_dim:
                raise ValueError(f"layer dims incompatible: {a.out_dim} -> {b.in_dim}")
        self.layers = layers

    @classmethod
    def create(
        cls,
        dims: list[int],
        m: int = 8,
        grid_range: tuple[float, float] = (-2.0, 2.0),
        seed: int = 0,
        learnable_centers: bool = False,
    ) -> "KanNetwork":
        """Seeded network with shape ``dims`` and a fresh uniform grid per layer."""
        if len(dims) < 2:
            raise ValueError("need at least input and output dims")
        rng = make_rng(seed)
        layers = []
        for n_in, n_out in zip(dims, dims[1:]):
            grid = RbfGrid.uniform(grid_range[0], grid_range[1], m, learnable=learnable_centers)
            layers.append(KanLayer(n_in, n_out, grid, rng=rng))
        return cls(layers)

    @property
    def in_dim(self) -> int:
        return self.layers[0].in_dim

    @property
    def out_dim(self) -> int:
        return self.layers[-1].out_dim

    def forward(self, x) -> tuple[np.ndarray, list[tuple[np.ndarray, np.ndarray]]]:
        """Output plus tape of per-layer (input, features) for the backward pass."""
        batch, squeeze = _as_batch(x, self.in_dim, "kan network input")
        tape = []
        cur = batch
        for layer in self.layers:
            feats = layer.features(cur)
            tape.append((cur, feats))
            cur = feats @ layer.weights.T
        return (cur[0] if squeeze else cur), tape

    def predict(self, x) -> np.ndarray:
        out, _ = self.forward(x)
        return out

    def backward(self, tape, upstream) -> tuple[KanGradients, np.ndarray]:
        """Gradients of a scalar loss given dL/d(output); also returns dL/d(input).

        ``tape`` must come from the matching ``forward`` call. Weight gradients
        accumulate over the batch; center gradients are produced only for
        learnable grids.
        """
        if len(tape) != len(self.layers):
            raise ValueError("tape does not match network depth")
        grad = np.asarray(upstream, dtype=np.float64)
        squeeze = grad.ndim == 1
        if squeeze:
            grad = grad[None, :]
        if grad.shape != (tape[-1][0].shape[0], self.out_dim):
            raise ValueError("upstream gradient shape does not match forward output")
        any_learnable = any(layer.grid.learnable for layer in self.layers)
        d_weights = [np.empty(0)] * len(self.layers)
        d_centers = [None] * len(self.layers) if any_learnable else None
        for idx in range(len(self.layers) - 1, -1, -1):
            layer = self.layers[idx]
            x, feats = tape[idx]
            if x.shape != (grad.shape[0], layer.in_dim) or feats.shape[1] != layer.in_dim * layer.grid.m:
                raise ValueError("stale or mismatched tape")
            d_weights[idx] = grad.T @ feats
            d_feats = grad @ layer.weights
            grad, d_grid = kernels.rbf_backward(x, layer.grid.centers, layer.grid.beta, feats, d_feats)
            if d_centers is not None:
                d_centers[idx] = d_grid if layer.grid.learnable else None
        grads = KanGradients(d_weights, d_centers)
        return grads, (grad[0] if squeeze else grad)

    def params(self) -> list[np.ndarray]:
        """Live parameter arrays: per-layer weights, plus centers of learnable grids."""
        out: list[np.ndarray] = []
        for layer in self.layers:
            out.append(layer.weights)
            if layer.grid.learnable:
                out.append(layer.grid.centers)
        return out

    def param_count(self) -> int:
        return sum(layer.param_count() for layer in self.layers)

    def dims(self) -> list[int]:
        return [self.in_dim] + [layer.out_dim for layer in self.layers]


def kan_param_count(net: KanNetwork) -> int:
    return net.param_count()
