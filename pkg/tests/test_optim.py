"""Loss, schedule, Adam, L-BFGS, and the training loop."""

import numpy as np
import pytest
import scipy.optimize

from deepokan.datagen import wave_regression_dataset
from deepokan.errors import NumericalError
from deepokan.mlp import MlpNetwork
from deepokan.optim import (
    AdamState,
    LbfgsState,
    TrainConfig,
    adam_step,
    flatten_arrays,
    lbfgs_step,
    rmsd_loss,
    rmsd_loss_and_grad,
    scheduled_lr,
    train,
    write_flat,
)

from conftest import assert_grad_close, central_diff


# ---------------------------------------------------------------- RMSD loss


def test_rmsd_hand_value():
    # sqrt((3^2 + 4^2) / 2) = sqrt(12.5)
    assert rmsd_loss([0.0, 0.0], [3.0, 4.0]) == pytest.approx(np.sqrt(12.5), rel=1e-15)


def test_rmsd_zero_on_exact_match():
    preds = np.array([[1.0, -2.0], [0.5, 3.0]])
    loss, grad = rmsd_loss_and_grad(preds.copy(), preds)
    assert loss == 0.0
    np.testing.assert_array_equal(grad, np.zeros_like(preds))


def test_rmsd_single_entry_is_abs_diff():
    assert rmsd_loss([2.0], [5.5]) == pytest.approx(3.5, rel=1e-15)


def test_rmsd_grad_formula():
    # grad = (pred - target) / (N * loss)
    loss, grad = rmsd_loss_and_grad([0.0, 0.0], [3.0, 4.0])
    np.testing.assert_allclose(grad, np.array([3.0, 4.0]) / (2 * loss), rtol=1e-15)


def test_rmsd_grad_matches_finite_differences():
    rng = np.random.default_rng(7)
    targets = rng.normal(size=(4, 3))
    preds = rng.normal(size=(4, 3))
    _, grad = rmsd_loss_and_grad(targets, preds)
    numeric = central_diff(lambda p: rmsd_loss(targets, p.reshape(4, 3)), preds.ravel())
    assert_grad_close(grad.ravel(), numeric)


def test_rmsd_grad_preserves_prediction_shape():
    preds = np.ones((2, 3, 4))
    _, grad = rmsd_loss_and_grad(np.zeros((2, 3, 4)), preds)
    assert grad.shape == preds.shape


def test_rmsd_rejects_empty_and_mismatched():
    with pytest.raises(ValueError):
        rmsd_loss([], [])
    with pytest.raises(ValueError):
        rmsd_loss([1.0, 2.0], [1.0])


# ----------------------------------------------------------------- schedule


def test_scheduled_lr_step_decay():
    # two full decay periods elapsed at epoch 2500 with t_step=1000
    assert scheduled_lr(1e-3, 0.5, 1000, 2500) == pytest.approx(2.5e-4, rel=1e-15)


def test_scheduled_lr_boundaries():
    assert scheduled_lr(1e-3, 0.9, 500, 0) == pytest.approx(1e-3)
    assert scheduled_lr(1e-3, 0.9, 500, 499) == pytest.approx(1e-3)
    assert scheduled_lr(1e-3, 0.9, 500, 500) == pytest.approx(1e-3 * 0.9)
    assert scheduled_lr(1e-3, 0.9, 500, 19999) == pytest.approx(1e-3 * 0.9**39)
    assert scheduled_lr(1e-3, 0.9, 500, 20000) == pytest.approx(1e-3 * 0.9**40)


def test_scheduled_lr_without_schedule_is_constant():
    for epoch in (0, 17, 100000):
        assert scheduled_lr(0.02, None, None, epoch) == 0.02


def test_scheduled_lr_non_increasing():
    values = [scheduled_lr(1.0, 0.7, 3, e) for e in range(50)]
    assert all(a >= b for a, b in zip(values, values[1:]))


def test_scheduled_lr_rejects_negative_epoch():
    with pytest.raises(ValueError):
        scheduled_lr(1e-3, 0.5, 1000, -1)


# --------------------------------------------------------------------- Adam


def test_adam_first_step_is_signed_lr():
    # bias correction makes the first update lr * g / (|g| + eps) ~ lr * sign(g)
    params = [np.array([1.0, -1.0])]
    grads = [np.array([2.0, -0.5])]
    adam_step(params, grads, AdamState(params), lr=0.1)
    np.testing.assert_allclose(params[0], [0.9, -0.9], atol=1e-8)


def test_adam_zero_gradient_is_noop():
    params = [np.array([3.0, -4.0])]
    state = AdamState(params)
    adam_step(params, [np.zeros(2)], state, lr=0.5)
    np.testing.assert_array_equal(params[0], [3.0, -4.0])


def test_adam_minimizes_quadratic():
    params = [np.array([10.0])]
    state = AdamState(params)
    for _ in range(800):
        grads = [params[0] - 3.0]  # d/dx 0.5*(x-3)^2
        adam_step(params, grads, state, lr=0.1)
    assert abs(params[0][0] - 3.0) < 1e-3


def test_adam_rejects_non_finite_gradient():
    params = [np.array([1.0])]
    state = AdamState(params)
    with pytest.raises(NumericalError):
        adam_step(params, [np.array([np.nan])], state, lr=0.1)
    assert state.t == 0  # state untouched by the failed step
    assert params[0][0] == 1.0


def test_adam_rejects_incongruent_inputs():
    params = [np.zeros(3)]
    state = AdamState(params)
    with pytest.raises(ValueError):
        adam_step(params, [], state, lr=0.1)
    with pytest.raises(ValueError):
        adam_step(params, [np.zeros(4)], state, lr=0.1)


# ------------------------------------------------------------------- L-BFGS


def _quadratic(x):
    return 0.5 * float(x @ x), x.copy()


def test_lbfgs_first_step_is_scaled_steepest_descent():
    # fresh history: direction -g, step lr * min(1, 1/|g|_1)
    x, f, _, accepted = lbfgs_step(np.array([3.0]), _quadratic, LbfgsState(), lr=1.0)
    assert accepted
    assert x[0] == pytest.approx(2.0, rel=1e-15)
    assert f == pytest.approx(2.0, rel=1e-15)


def test_lbfgs_solves_quadratic():
    x = np.array([1.0, -2.0, 0.5])
    state = LbfgsState()
    for _ in range(10):
        x, f, g, accepted = lbfgs_step(x, _quadratic, state)
        if np.max(np.abs(x)) < 1e-6:
            break
    assert np.max(np.abs(x)) < 1e-6


def test_lbfgs_solves_rosenbrock():
    def fg(x):
        f = float(scipy.optimize.rosen(x))
        return f, scipy.optimize.rosen_der(x)

    x = np.array([-1.2, 1.0])
    state = LbfgsState()
    losses = [fg(x)[0]]
    for _ in range(200):
        x, f, g, _ = lbfgs_step(x, fg, state)
        losses.append(f)
        if f < 1e-10:
            break
    assert losses[-1] < 1e-5
    # accepted steps never increase the loss (Armijo condition)
    assert all(b <= a for a, b in zip(losses, losses[1:]))
    # sanity: at least as good as scipy's own L-BFGS-B stopped at its default tol
    ref = scipy.optimize.minimize(
        scipy.optimize.rosen, [-1.2, 1.0], jac=scipy.optimize.rosen_der, method="L-BFGS-B"
    )
    assert losses[-1] <= max(ref.fun, 1e-5)


def test_lbfgs_stationary_point_returns_unchanged():
    x, f, g, accepted = lbfgs_step(np.zeros(2), _quadratic, LbfgsState())
    assert not accepted
    np.testing.assert_array_equal(x, np.zeros(2))


def test_lbfgs_failed_line_search_keeps_point():
    # constant loss with a fake nonzero gradient can never satisfy Armijo
    def flat(x):
        return 1.0, np.ones_like(x)

    x0 = np.array([0.3, -0.7])
    x, f, g, accepted = lbfgs_step(x0.copy(), flat, LbfgsState())
    assert not accepted
    np.testing.assert_array_equal(x, x0)
    assert f == 1.0


def test_lbfgs_rejects_non_finite_start():
    def bad(x):
        return np.inf, np.zeros_like(x)

    with pytest.raises(NumericalError):
        lbfgs_step(np.array([1.0]), bad, LbfgsState())


def test_lbfgs_history_cap_and_curvature():
    state = LbfgsState(history_cap=10)
    assert not state.insert(np.array([1.0]), np.array([-1.0]))  # s.y < 0 rejected
    assert len(state.s_list) == 0
    for i in range(1, 13):
        assert state.insert(np.array([float(i)]), np.array([float(i)]))
    assert len(state.s_list) == 10
    assert state.s_list[0][0] == 3.0  # oldest two evicted


def test_flatten_and_write_round_trip():
    arrays = [np.arange(6.0).reshape(2, 3), np.array([7.0]), np.arange(4.0)]
    flat = flatten_arrays(arrays)
    assert flat.shape == (11,)
    targets = [np.zeros((2, 3)), np.zeros(1), np.zeros(4)]
    write_flat(flat, targets)
    for a, b in zip(arrays, targets):
        np.testing.assert_array_equal(a, b)
    with pytest.raises(ValueError):
        write_flat(flat[:-1], targets)


# ------------------------------------------------------------ train config


@pytest.mark.parametrize(
    "kwargs",
    [
        {"optimizer": "sgd"},
        {"lr": 0.0},
        {"lr": -1.0},
        {"gamma": 0.5},
        {"t_step": 10},
        {"gamma": 0.0, "t_step": 10},
        {"gamma": 1.5, "t_step": 10},
        {"gamma": 0.5, "t_step": 0},
        {"epochs": -1},
        {"batch_size": 0},
    ],
)
def test_train_config_rejects_bad_values(kwargs):
    with pytest.raises(ValueError):
        TrainConfig(**kwargs)


def test_train_config_accepts_gamma_one():
    cfg = TrainConfig(gamma=1.0, t_step=5)
    assert cfg.gamma == 1.0


# ------------------------------------------------------------ training loop


def _line_dataset(n=32):
    xs = np.linspace(0.0, 1.0, n)
    return wave_regression_dataset(xs, 2.0 * xs)


def test_train_zero_epochs_is_noop():
    model = MlpNetwork.create([1, 1], seed=0)
    before = [p.copy() for p in model.params()]
    report = train(model, _line_dataset(), TrainConfig(epochs=0))
    assert report.loss_history == []
    assert report.abort_reason is None
    for p, q in zip(model.params(), before):
        np.testing.assert_array_equal(p, q)


def test_train_fits_line_with_adam():
    # a [1, 1] network is a plain affine map; learn y = 2x
    model = MlpNetwork.create([1, 1], seed=0)
    config = TrainConfig(
        optimizer="adam", lr=0.1, gamma=0.5, t_step=100, epochs=500, batch_size=32, seed=0
    )
    report = train(model, _line_dataset(), config)
    assert report.abort_reason is None
    w, b = model.params()
    assert abs(w[0, 0] - 2.0) < 1e-3
    assert abs(b[0]) < 1e-3
    assert report.loss_history[-1][2] < 2e-3


def test_train_fits_line_with_lbfgs():
    model = MlpNetwork.create([1, 1], seed=0)
    config = TrainConfig(optimizer="lbfgs", lr=1.0, epochs=40, batch_size=64, seed=0)
    report = train(model, _line_dataset(), config)
    assert report.abort_reason is None
    assert report.loss_history[-1][2] < 1e-6
    w, b = model.params()
    assert abs(w[0, 0] - 2.0) < 1e-4


def test_train_records_scheduled_lr():
    model = MlpNetwork.create([1, 1], seed=0)
    config = TrainConfig(lr=1e-2, gamma=0.5, t_step=2, epochs=5, batch_size=64)
    report = train(model, _line_dataset(), config)
    lrs = [lr for _, lr, _ in report.loss_history]
    np.testing.assert_allclose(lrs, [1e-2, 1e-2, 5e-3, 5e-3, 2.5e-3], rtol=1e-15)


def test_train_is_deterministic():
    histories = []
    for _ in range(2):
        model = MlpNetwork.create([1, 4, 1], seed=3)
        config = TrainConfig(lr=1e-2, epochs=20, batch_size=8, seed=11)
        histories.append(train(model, _line_dataset(), config).loss_history)
    assert histories[0] == histories[1]


def test_train_oversized_batch_equals_full_batch():
    # a batch size past the sample count still means one full batch per epoch
    histories = []
    for batch in (32, 999):
        model = MlpNetwork.create([1, 1], seed=0)
        config = TrainConfig(lr=1e-2, epochs=10, batch_size=batch, seed=0)
        histories.append(train(model, _line_dataset(32), config).loss_history)
    assert histories[0] == histories[1]


@pytest.mark.filterwarnings("ignore:overflow")
def test_train_aborts_on_divergence():
    model = MlpNetwork.create([1, 1], seed=0)
    config = TrainConfig(optimizer="adam", lr=1e200, epochs=50, batch_size=32, seed=0)
    report = train(model, _line_dataset(), config)
    assert report.abort_reason is not None
    assert "non-finite" in report.abort_reason
    assert len(report.loss_history) < 50


def test_train_rejects_empty_split():
    ds = _line_dataset()
    ds.train_idx = np.arange(0)
    model = MlpNetwork.create([1, 1], seed=0)
    with pytest.raises(ValueError):
        train(model, ds, TrainConfig(epochs=1))
