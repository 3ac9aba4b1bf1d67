"""Compare the numba and pure-numpy kernel backends.

Times the three hot kernels (RBF feature forward, its backward pass, and
wave-family evaluation) plus one end-to-end training burst. Run twice to
see both backends:

    python benchmarks/bench_backends.py
    DEEPOKAN_NUMBA=0 python benchmarks/bench_backends.py
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from deepokan import KanNetwork, TrainConfig, kernels, train
from deepokan.datagen.waves import gen_wave1, wave_regression_dataset
from deepokan.rng import make_rng


def timeit(fn, repeats: int) -> float:
    fn()  # warm-up (numba compiles here)
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--batch", type=int, default=4096)
    parser.add_argument("--in-dim", type=int, default=8)
    parser.add_argument("--m", type=int, default=8)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = make_rng(0)
    x = rng.uniform(-2, 2, size=(args.batch, args.in_dim))
    centers = np.linspace(-2, 2, args.m)
    beta = centers[1] - centers[0]
    feats = kernels.rbf_forward(x, centers, beta)
    d_feats = rng.standard_normal(feats.shape)
    coeffs = rng.uniform(-1, 1, size=(512, 3))
    xs = np.linspace(-3, 3, 256)

    print(f"backend: {kernels.BACKEND}")
    print(f"rbf_forward  ({args.batch}x{args.in_dim}, m={args.m}): "
          f"{timeit(lambda: kernels.rbf_forward(x, centers, beta), args.repeats) * 1e3:8.3f} ms")
    print(f"rbf_backward (same shape):                 "
          f"{timeit(lambda: kernels.rbf_backward(x, centers, beta, feats, d_feats), args.repeats) * 1e3:8.3f} ms")
    print(f"wave_family  (512 samples x 256 points):   "
          f"{timeit(lambda: kernels.wave_family(coeffs, xs), args.repeats) * 1e3:8.3f} ms")

    ds = wave_regression_dataset(*gen_wave1(1000))
    config = TrainConfig(optimizer="adam", lr=1e-2, epochs=20, batch_size=1000, seed=0)

    def burst():
        net = KanNetwork.create([1, 8, 8, 1], m=8, seed=0)
        train(net, ds, config)

    print(f"KAN training burst (20 epochs, 1000 pts):  {timeit(burst, args.repeats) * 1e3:8.3f} ms")


if __name__ == "__main__":
    main()
