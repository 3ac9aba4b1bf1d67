"""Loss, optimizers and the training loop.

The training loss is the root mean square deviation over all predicted
entries of a batch. Two optimizers are provided: bias-corrected Adam with
an optional step-decay learning-rate schedule, and L-BFGS (two-loop
recursion, bounded history, Armijo backtracking line search). Training is
deterministic given (seed, config, dataset): mini-batch order comes from a
seeded per-epoch shuffle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .operator import OperatorModel
from .report import RunReport
from .rng import SHUFFLE_STREAM, make_rng

OPTIMIZERS = ("adam", "lbfgs")


@dataclass
class TrainConfig:
    optimizer: str = "adam"
    lr: float = 1e-3
    gamma: float | None = None
    t_step: int | None = None
    epochs: int = 1
    batch_size: int = 64
    seed: int = 0

    def __post_init__(self):
        if self.optimizer not in OPTIMIZERS:
            raise ValueError(f"optimizer must be one of {OPTIMIZERS}")
        if not self.lr > 0:
            raise ValueError("lr must be positive")
        if (self.gamma is None) != (self.t_step is None):
            raise ValueError("gamma and t_step must be given together")
        if self.gamma is not None and not 0 < self.gamma <= 1:
            raise ValueError("gamma must lie in (0, 1]")
        if self.t_step is not None and self.t_step < 1:
            raise ValueError("t_step must be at least 1")
        if self.epochs < 0:
            raise ValueError("epochs must be non-negative")
        if self.batch_size < 1:
            raise ValueError("batch_size must be at least 1")


def rmsd_loss(targets, predictions) -> float:
    """sqrt(mean((target - prediction)^2)) over all entries."""
    loss, _ = rmsd_loss_and_grad(targets, predictions)
    return loss


def rmsd_loss_and_grad(targets, predictions) -> tuple[float, np.ndarray]:
    """Loss plus its gradient w.r.t. predictions, (pred - target) / (N * RMSD).

    The gradient is defined as zero when the loss is exactly zero.
    """
    t = np.asarray(targets, dtype=np.float64)
    p = np.asarray(predictions, dtype=np.float64)
    if t.size == 0:
        raise ValueError("rmsd over empty inputs is undefined")
    if t.size != p.size:
        raise ValueError(f"size mismatch: {t.size} targets vs {p.size} predictions")
    diff = p.ravel() - t.ravel()
    n = diff.size
    loss = float(np.sqrt(diff @ diff / n))
    if loss == 0.0:
        return 0.0, np.zeros_like(p)
    grad = (diff / (n * loss)).reshape(p.shape)
    return loss, grad


def scheduled_lr(lr0: float, gamma: float | None, t_step: int | None, epoch: int) -> float:
    """Step decay: lr0 * gamma^floor(epoch / t_step); plain lr0 without a schedule."""
    if epoch < 0:
        raise ValueError("epoch must be non-negative")
    if gamma is None or t_step is None:
        return lr0
    return lr0 * gamma ** (epoch // t_step)


class AdamState:
    """First/second moment accumulators, shape-congruent with the parameters."""

    def __init__(self, params: list[np.ndarray], beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]


def adam_step(params: list[np.ndarray], grads: list[np.ndarray], state: AdamState, lr: float) -> None:
    """One bias-corrected Adam update, in place."""
    if len(params) != len(grads) or len(params) != len(state.m):
        raise ValueError("params, grads and state must be congruent")
    for g in grads:
        if not np.all(np.isfinite(g)):
            raise NumericalError("non-finite gradient; aborting Adam step")
    state.t += 1
    b1, b2 = state.beta1, state.beta2
    c1 = 1.0 - b1 ** state.t
    c2 = 1.0 - b2 ** state.t
    for p, g, m, v in zip(params, grads, state.m, state.v):
        if p.shape != g.shape:
            raise ValueError(f"gradient shape {g.shape} != parameter shape {p.shape}")
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * g * g
        p -= lr * (m / c1) / (np.sqrt(v / c2) + state.eps)


class LbfgsState:
    """Bounded (s, y) history plus line-search constants."""

    def __init__(self, history_cap: int = 10, c1: float = 1e-4, max_backtracks: int = 25):
        self.history_cap = history_cap
        self.c1 = c1
        self.max_backtracks = max_backtracks
        self.s_list: list[np.ndarray] = []
        self.y_list: list[np.ndarray] = []
        self.rho_list: list[float] = []
        self.step_count = 0

    def insert(self, s: np.ndarray, y: np.ndarray) -> bool:
        sy = float(s @ y)
        if not sy > 0.0:  # curvature condition
            return False
        self.s_list.append(s)
        self.y_list.append(y)
        self.rho_list.append(1.0 / sy)
        if len(self.s_list) > self.history_cap:
            self.s_list.pop(0)
            self.y_list.pop(0)
            self.rho_list.pop(0)
        return True


def _two_loop_direction(g: np.ndarray, state: LbfgsState) -> np.ndarray:
    q = g.copy()
    alphas = []
    for s, y, rho in zip(reversed(state.s_list), reversed(state.y_list), reversed(state.rho_list)):
        a = rho * (s @ q)
        alphas.append(a)
        q -= a * y
    if state.s_list:
        s, y = state.s_list[-1], state.y_list[-1]
        q *= (s @ y) / (y @ y)
    for (s, y, rho), a in zip(
        zip(state.s_list, state.y_list, state.rho_list), reversed(alphas)
    ):
        b = rho * (y @ q)
        q += s * (a - b)
    return -q


def lbfgs_step(
    x: np.ndarray,
    loss_and_grad,
    state: LbfgsState,
    lr: float = 1.0,
) -> tuple[np.ndarray, float, np.ndarray, bool]:
    """One L-BFGS iteration from ``x``.

    ``loss_and_grad(x) -> (f, g)`` must be deterministic during the step.
    Returns (x_new, f_new, g_new, accepted); a failed Armijo search returns
    the unchanged point with accepted=False.
    """
    x = np.asarray(x, dtype=np.float64)
    f0, g0 = loss_and_grad(x)
    if not (np.isfinite(f0) and np.all(np.isfinite(g0))):
        raise NumericalError("non-finite loss or gradient at line-search start")
    d = _two_loop_direction(g0, state)
    dd = float(g0 @ d)
    if dd >= 0.0:  # history produced a non-descent direction; fall back
        d = -g0
        dd = -float(g0 @ g0)
    if dd == 0.0:  # exact stationary point
        return x, f0, g0, False
    if state.step_count == 0:
        step = lr * min(1.0, 1.0 / np.abs(g0).sum())
    else:
        step = lr
    accepted = False
    x_new, f_new, g_new = x, f0, g0
    for _ in range(state.max_backtracks):
        trial = x + step * d
        f_t, g_t = loss_and_grad(trial)
        if np.isfinite(f_t) and f_t <= f0 + state.c1 * step * dd:
            x_new, f_new, g_new = trial, f_t, g_t
            accepted = True
            break
        step *= 0.5
    if accepted:
        state.insert(x_new - x, g_new - g0)
        state.step_count += 1
    return x_new, f_new, g_new, accepted


def flatten_arrays(arrays: list[np.ndarray]) -> np.ndarray:
    return np.concatenate([np.asarray(a, dtype=np.float64).ravel() for a in arrays])


def write_flat(vec: np.ndarray, arrays: list[np.ndarray]) -> None:
    """Scatter a flat vector back into the live parameter arrays."""
    k = 0
    for a in arrays:
        n = a.size
        a[...] = vec[k : k + n].reshape(a.shape)
        k += n
    if k != vec.size:
        raise ValueError("flat vector length does not match parameter arrays")


def _batch_loss_and_grads(model, batch_inputs, batch_targets) -> tuple[float, list[np.ndarray]]:
    if isinstance(model, OperatorModel):
        q, coords = batch_inputs
        preds, tape = model.forward(q, coords)
        loss, dpred = rmsd_loss_and_grad(batch_targets, preds)
        grads = model.backward(tape, dpred)
        return loss, grads.arrays()
    preds, tape = model.forward(batch_inputs)
    loss, dpred = rmsd_loss_and_grad(batch_targets, preds)
    grads, _ = model.backward(tape, dpred)
    return loss, grads.arrays()


def train(model, dataset, config: TrainConfig) -> RunReport:
    """Mini-batch training of an operator model or a bare network.

    Uses the dataset's train split. Batches are drawn from a seeded
    per-epoch shuffle; the recorded loss per epoch is the mean batch RMSD
    (for L-BFGS, the post-step value). Divergence aborts with a partial
    history and a reason instead of raising.
    """
    is_operator = isinstance(model, OperatorModel)
    train_idx = np.asarray(dataset.train_idx, dtype=np.int64)
    inputs = np.asarray(dataset.branch_inputs, dtype=np.float64)[train_idx]
    targets = np.asarray(dataset.targets, dtype=np.float64)[train_idx]
    coords = np.asarray(dataset.coords, dtype=np.float64) if is_operator else None
    n = inputs.shape[0]
    if n == 0:
        raise ValueError("empty training split")

    params = model.params()
    shuffle_rng = make_rng(config.seed, stream=SHUFFLE_STREAM)
    adam_state = AdamState(params) if config.optimizer == "adam" else None
    lbfgs_state = LbfgsState() if config.optimizer == "lbfgs" else None

    report = RunReport()
    for epoch in range(config.epochs):
        lr = scheduled_lr(config.lr, config.gamma, config.t_step, epoch)
        order = shuffle_rng.permutation(n)
        batch_losses = []
        for start in range(0, n, config.batch_size):
            sel = order[start : start + config.batch_size]
            batch_in = (inputs[sel], coords) if is_operator else inputs[sel]
            batch_t = targets[sel]
            if config.optimizer == "adam":
                loss, grads = _batch_loss_and_grads(model, batch_in, batch_t)
                if not np.isfinite(loss):
                    report.abort_reason = f"non-finite loss at epoch {epoch}"
                    return report
                try:
                    adam_step(params, grads, adam_state, lr)
                except NumericalError as exc:
                    report.abort_reason = f"{exc} (epoch {epoch})"
                    return report
            else:

                def fg(vec):
                    write_flat(vec, params)
                    loss, grads = _batch_loss_and_grads(model, batch_in, batch_t)
                    return loss, flatten_arrays(grads)

                try:
                    x_new, loss, _, _ = lbfgs_step(flatten_arrays(params), fg, lbfgs_state, lr)
                except NumericalError as exc:
                    report.abort_reason = f"{exc} (epoch {epoch})"
                    return report
                write_flat(x_new, params)
            batch_losses.append(loss)
        report.loss_history.append((epoch, lr, float(np.mean(batch_losses))))
    return report
