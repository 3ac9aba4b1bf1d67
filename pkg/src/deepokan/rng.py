"""Deterministic random streams.

All randomness in the package flows through counter-based Philox generators
keyed by ``(seed, stream)``. Distinct streams are statistically independent,
so per-sample data generation can be parallelized without changing results.
"""

import numpy as np

# Stream namespaces. Data generation uses the sample index as the stream,
# so bookkeeping streams live far above any realistic sample count.
SPLIT_STREAM = 2**48
SHUFFLE_STREAM = 2**48 + 1


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Generator for the given ``(seed, stream)`` key pair."""
    if seed < 0 or stream < 0:
        raise ValueError("seed and stream must be non-negative")
    key = np.array([seed, stream], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
