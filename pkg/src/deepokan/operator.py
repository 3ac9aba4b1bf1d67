"""Branch/trunk operator assembly.

An operator model pairs a branch network (encoding the conditioning input
q: load constants, material parameters, a boundary-condition time series)
with a trunk network (encoding query coordinates), both from the same
family: two MLPs form a DeepONet, two RBF-KANs form a DeepOKAN.

Scalar mode fuses the width-r outputs as a dot product per query point:

    prediction(x) = sum_i b_i * t_i(x)  (+ optional scalar bias)

Transient mode gives the branch an output of length M*r, reshaped row-major
to (M, r), so each query point yields an M-step time history: row m of the
reshape acts as the scalar-mode branch vector of time increment m.

Branch inputs and trunk coordinates are min-max normalized to [-1, 1] with
training-set statistics when normalizers are attached; this keeps inputs
inside the finite support of the RBF grids and is stored with checkpoints.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kan import KanNetwork, _as_batch
from .mlp import MlpNetwork

MODES = ("scalar", "transient")


@dataclass
class MinMaxNormalizer:
    """Per-feature affine map onto [-1, 1]; constant features map to 0."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        self.lo = np.asarray(self.lo, dtype=np.float64)
        self.hi = np.asarray(self.hi, dtype=np.float64)
        if self.lo.shape != self.hi.shape or self.lo.ndim != 1:
            raise ValueError("lo and hi must be matching 1-D arrays")
        if np.any(self.hi < self.lo):
            raise ValueError("hi must be >= lo per feature")

    @classmethod
    def fit(cls, data: np.ndarray) -> "MinMaxNormalizer":
        data = np.asarray(data, dtype=np.float64)
        return cls(lo=data.min(axis=0), hi=data.max(axis=0))

    def __call__(self, x: np.ndarray) -> np.ndarray:
        width = self.hi - self.lo
        safe = np.where(width > 0, width, 1.0)
        out = 2.0 * (x - self.lo) / safe - 1.0
        if np.any(width == 0):
            out = np.where(width == 0, 0.0, out)
        return out


@dataclass
class OperatorTape:
    """Cached intermediates of one operator forward call."""

    branch_tape: list
    trunk_tape: list
    branch_out: np.ndarray
    trunk_out: np.ndarray
    squeeze: bool


class OperatorGradients:
    """Gradients for both subnetworks plus the optional fusion bias."""

    def __init__(self, branch, trunk, bias: np.ndarray | None):
        self.branch = branch
        self.trunk = trunk
        self.bias = bias

    def arrays(self) -> list[np.ndarray]:
        out = self.branch.arrays() + self.trunk.arrays()
        if self.bias is not None:
            out.append(self.bias)
        return out


class OperatorModel:
    """DeepONet / DeepOKAN: same-family branch and trunk fused over width r."""

    def __init__(
        self,
        branch: KanNetwork | MlpNetwork,
        trunk: KanNetwork | MlpNetwork,
        r: int,
        mode: str = "scalar",
        time_steps: int | None = None,
        bias: float | None = None,
        branch_norm: MinMaxNormalizer | None = None,
        trunk_norm: MinMaxNormalizer | None = None,
    ):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if type(branch) is not type(trunk):
            raise ValueError("branch and trunk must be the same network family")
        if r < 1:
            raise ValueError("fusion width r must be positive")
        if trunk.out_dim != r:
            raise ValueError(f"trunk output dim {trunk.out_dim} != r = {r}")
        if mode == "scalar":
            if time_steps is not None:
                raise ValueError("time_steps only applies to transient mode")
            if branch.out_dim != r:
                raise ValueError(f"branch output dim {branch.out_dim} != r = {r}")
        else:
            if time_steps is None or time_steps < 1:
                raise ValueError("transient mode needs positive time_steps")
            if branch.out_dim != time_steps * r:
                raise ValueError(
                    f"branch output dim {branch.out_dim} != time_steps * r = {time_steps * r}"
                )
        self.branch = branch
        self.trunk = trunk
        self.r = r
        self.mode = mode
        self.time_steps = time_steps
        self.bias = np.array([bias], dtype=np.float64) if bias is not None else None
        self.branch_norm = branch_norm
        self.trunk_norm = trunk_norm

    @property
    def family(self) -> str:
        return "kan" if isinstance(self.branch, KanNetwork) else "mlp"

    def forward(self, q, coords) -> tuple[np.ndarray, OperatorTape]:
        """Predictions plus tape.

        q: (branch_in,) or (samples, branch_in); coords: (points, trunk_in).
        Scalar mode returns (samples, points); transient mode
        (samples, points, time_steps). A vector q drops the samples axis.
        """
        q2d, squeeze = _as_batch(q, self.branch.in_dim, "operator branch input")
        x2d, _ = _as_batch(coords, self.trunk.in_dim, "operator trunk input")
        if self.branch_norm is not None:
            q2d = self.branch_norm(q2d)
        if self.trunk_norm is not None:
            x2d = self.trunk_norm(x2d)
        b_out, b_tape = self.branch.forward(q2d)
        t_out, t_tape = self.trunk.forward(x2d)
        if self.mode == "scalar":
            values = b_out @ t_out.T
        else:
            m = self.time_steps
            bq = b_out.reshape(b_out.shape[0], m, self.r)
            # (1, P, r) @ (S, r, M) -> (S, P, M)
            values = np.matmul(t_out[None, :, :], bq.transpose(0, 2, 1))
        if self.bias is not None:
            values = values + self.bias[0]
        tape = OperatorTape(b_tape, t_tape, b_out, t_out, squeeze)
        return (values[0] if squeeze else values), tape

    def predict(self, q, coords) -> np.ndarray:
        values, _ = self.forward(q, coords)
        return values

    def backward(self, tape: OperatorTape, residual) -> OperatorGradients:
        """Gradients of a scalar loss given dL/d(prediction).

        The fusion is bilinear, so the upstream signals are
        dL/db = residual . t and dL/dt = residual . b (summing over the time
        index in transient mode); they are then pushed through the
        subnetworks' own backward passes.
        """
        res = np.asarray(residual, dtype=np.float64)
        if tape.squeeze:
            res = res[None, ...]
        s = tape.branch_out.shape[0]
        p = tape.trunk_out.shape[0]
        if self.mode == "scalar":
            if res.shape != (s, p):
                raise ValueError(f"residual shape {res.shape} != {(s, p)}")
            d_branch = res @ tape.trunk_out
            d_trunk = res.T @ tape.branch_out
        else:
            m = self.time_steps
            if res.shape != (s, p, m):
                raise ValueError(f"residual shape {res.shape} != {(s, p, m)}")
            bq = tape.branch_out.reshape(s, m, self.r)
            # (S, M, P) @ (P, r) -> (S, M, r)
            d_branch = np.matmul(res.transpose(0, 2, 1), tape.trunk_out).reshape(s, m * self.r)
            d_trunk = np.einsum("spm,smi->pi", res, bq, optimize=True)
        branch_grads, _ = self.branch.backward(tape.branch_tape, d_branch)
        trunk_grads, _ = self.trunk.backward(tape.trunk_tape, d_trunk)
        d_bias = np.array([res.sum()]) if self.bias is not None else None
        return OperatorGradients(branch_grads, trunk_grads, d_bias)

    def params(self) -> list[np.ndarray]:
        out = self.branch.params() + self.trunk.params()
        if self.bias is not None:
            out.append(self.bias)
        return out

    def param_count(self) -> int:
        count = self.branch.param_count() + self.trunk.param_count()
        if self.bias is not None:
            count += 1
        return count


def operator_param_count(model: OperatorModel) -> int:
    return model.param_count()
