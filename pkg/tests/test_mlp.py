"""Dense baseline network: forward values, parameter counts, gradients."""

import numpy as np
import pytest

from deepokan import DenseLayer, MlpNetwork, mlp_param_count
from deepokan.rng import make_rng
from conftest import assert_grad_close, central_diff


def test_layer_forward_is_affine_plus_activation():
    w = np.array([[2.0, -1.0]])
    b = np.array([0.5])
    layer = DenseLayer(2, 1, activation="tanh", weights=w, bias=b)
    x = np.array([[1.0, 3.0]])
    np.testing.assert_allclose(layer_forward(layer, x), np.tanh([[2.0 - 3.0 + 0.5]]))
    ident = DenseLayer(2, 1, activation="identity", weights=w, bias=b)
    np.testing.assert_allclose(layer_forward(ident, x), [[-0.5]])


def layer_forward(layer, x):
    net = MlpNetwork([layer])
    return net.forward(x)[0]


def test_param_count_matches_reference_size():
    mlp = MlpNetwork.create([1, 24, 24, 1])
    # 24 + 24 weights... : 1*24+24 + 24*24+24 + 24*1+1 = 673
    assert mlp.param_count() == 673
    assert mlp_param_count(mlp) == 673


def test_hidden_layers_tanh_output_identity():
    net = MlpNetwork.create([1, 3, 2])
    assert [layer.activation for layer in net.layers] == ["tanh", "identity"]


def test_fresh_network_bias_is_zero():
    net = MlpNetwork.create([2, 4, 1], seed=3)
    for layer in net.layers:
        np.testing.assert_array_equal(layer.bias, np.zeros(layer.out_dim))


@pytest.mark.parametrize("seed", range(20))
def test_gradients_match_finite_differences(seed):
    rng = make_rng(seed)
    net = MlpNetwork.create([3, 5, 2], seed=seed)
    x = rng.uniform(-2, 2, size=(7, 3))
    upstream = rng.standard_normal((7, 2))
    _, tape = net.forward(x)
    grads, dx = net.backward(tape, upstream)

    def run(v):
        return float((net.forward(v)[0] * upstream).sum())

    for layer, gw, gb in zip(net.layers, grads.weights, grads.biases):
        def loss_of_weights(w, L=layer):
            saved = L.weights
            L.weights = w
            val = run(x)
            L.weights = saved
            return val

        def loss_of_bias(b, L=layer):
            saved = L.bias
            L.bias = b
            val = run(x)
            L.bias = saved
            return val

        assert_grad_close(gw, central_diff(loss_of_weights, layer.weights.copy()))
        assert_grad_close(gb, central_diff(loss_of_bias, layer.bias.copy()))
    assert_grad_close(dx, central_diff(run, x.copy()))


def test_params_align_with_gradient_arrays():
    net = MlpNetwork.create([2, 3, 1])
    x = np.ones((4, 2))
    _, tape = net.forward(x)
    grads, _ = net.backward(tape, np.ones((4, 1)))
    assert [p.shape for p in net.params()] == [g.shape for g in grads.arrays()]


def test_rejects_unknown_activation():
    with pytest.raises(ValueError):
        DenseLayer(2, 2, activation="relu")
