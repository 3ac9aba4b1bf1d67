"""Dense baseline networks: affine layers with tanh hidden activations.

The counterpart of :mod:`deepokan.kan` with the classic parametrization
(weight matrix plus bias per layer, fixed activation on nodes). Hidden
layers use tanh, the output layer is linear; the backward pass is standard
backprop written out explicitly.
"""

from __future__ import annotations

import numpy as np

from .kan import _as_batch
from .rng import make_rng

ACTIVATIONS = ("tanh", "identity")


class DenseLayer:
    """Affine map with a tanh or identity activation."""

    def __init__(
        self,
        in_dim: int,
        out_dim: int,
        activation: str = "tanh",
        weights: np.ndarray | None = None,
        bias: np.ndarray | None = None,
        rng: np.random.Generator | None = None,
    ):
        if in_dim < 1 or out_dim < 1:
            raise ValueError("layer dimensions must be positive")
        if activation not in ACTIVATIONS:
            raise ValueError(f"activation must be one of {ACTIVATIONS}")
        self.in_dim = in_dim
        self.out_dim = out_dim
        self.activation = activation
        if weights is None:
            scale = np.sqrt(1.0 / in_dim)
            rng = rng if rng is not None else make_rng(0)
            weights = rng.uniform(-scale, scale, size=(out_dim, in_dim))
        if bias is None:
            bias = np.zeros(out_dim)
        self.weights = np.asarray(weights, dtype=np.float64)
        self.bias = np.asarray(bias, dtype=np.float64)
        if self.weights.shape != (out_dim, in_dim) or self.bias.shape != (out_dim,):
            raise ValueError("weight or bias shape does not match layer dimensions")

    def param_count(self) -> int:
        return self.out_dim * self.in_dim + self.out_dim


class MlpGradients:
    """Per-layer weight and bias gradients for an MlpNetwork."""

    def __init__(self, weights: list[np.ndarray], biases: list[np.ndarray]):
        self.weights = weights
        self.biases = biases

    def arrays(self) -> list[np.ndarray]:
        out = []
        for dw, db in zip(self.weights, self.biases):
            out.append(dw)
            out.append(db)
        return out


class MlpNetwork:
    """Chain of dense layers; final layer is linear for unbounded targets."""

    def __init__(self, layers: list[DenseLayer]):
        for a, b in zip(layers, layers[1:]):
            if a.out_dim != b.in_dim:
                raise ValueError(f"layer dims incompatible: {a.out_dim} -> {b.in_dim}")
        self.layers = layers

    @classmethod
    def create(cls, dims: list[int], seed: int = 0) -> "MlpNetwork":
        """Seeded network with shape ``dims``, tanh hidden and linear output."""
        if len(dims) < 2:
            raise ValueError("need at least input and output dims")
        rng = make_rng(seed)
        layers = []
        last = len(dims) - 2
        for k, (n_in, n_out) in enumerate(zip(dims, dims[1:])):
            act = "identity" if k == last else "tanh"
            layers.append(DenseLayer(n_in, n_out, activation=act, rng=rng))
        return cls(layers)

    @property
    def in_dim(self) -> int:
        return self.layers[0].in_dim

    @property
    def out_dim(self) -> int:
        return self.layers[-1].out_dim

    def forward(self, x) -> tuple[np.ndarray, list[tuple[np.ndarray, np.ndarray]]]:
        """Output plus tape of per-layer (input, post-activation output)."""
        batch, squeeze = _as_batch(x, self.in_dim, "mlp input")
        tape = []
        cur = batch
        for layer in self.layers:
            pre = cur @ layer.weights.T + layer.bias
            out = np.tanh(pre) if layer.activation == "tanh" else pre
            tape.append((cur, out))
            cur = out
        return (cur[0] if squeeze else cur), tape

    def predict(self, x) -> np.ndarray:
        out, _ = self.forward(x)
        return out

    def backward(self, tape, upstream) -> tuple[MlpGradients, np.ndarray]:
        """Exact gradients of the forward composition; also returns dL/d(input)."""
        if len(tape) != len(self.layers):
            raise ValueError("tape does not match network depth")
        grad = np.asarray(upstream, dtype=np.float64)
        squeeze = grad.ndim == 1
        if squeeze:
            grad = grad[None, :]
        if grad.shape != (tape[-1][0].shape[0], self.out_dim):
            raise ValueError("upstream gradient shape does not match forward output")
        d_weights = [np.empty(0)] * len(self.layers)
        d_biases = [np.empty(0)] * len(self.layers)
        for idx in range(len(self.layers) - 1, -1, -1):
            layer = self.layers[idx]
            x, out = tape[idx]
            if x.shape != (grad.shape[0], layer.in_dim):
                raise ValueError("stale or mismatched tape")
            if layer.activation == "tanh":
                grad = grad * (1.0 - out * out)
            d_weights[idx] = grad.T @ x
            d_biases[idx] = grad.sum(axis=0)
            grad = grad @ layer.weights
        grads = MlpGradients(d_weights, d_biases)
        return grads, (grad[0] if squeeze else grad)

    def params(self) -> list[np.ndarray]:
        out: list[np.ndarray] = []
        for layer in self.layers:
            out.append(layer.weights)
            out.append(layer.bias)
        return out

    def param_count(self) -> int:
        return sum(layer.param_count() for layer in self.layers)

    def dims(self) -> list[int]:
        return [self.in_dim] + [layer.out_dim for layer in self.layers]


def mlp_param_count(net: MlpNetwork) -> int:
    return net.param_count()
