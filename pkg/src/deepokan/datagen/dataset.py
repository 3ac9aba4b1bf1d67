"""Sample containers and train/test splitting."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..operator import MinMaxNormalizer
from ..rng import SPLIT_STREAM, make_rng


@dataclass
class Dataset:
    """Generated samples plus an optional split and normalization stats.

    ``branch_inputs`` is (num_samples, branch_dim). ``targets`` is
    (num_samples, num_points) for scalar operator data,
    (num_samples, num_points, M) for transient data, or
    (num_samples, out_dim) for plain pointwise regression, in which case
    ``coords`` is None. ``coords`` (num_points, coord_dim) is shared by all
    samples.
    """

    branch_inputs: np.ndarray
    targets: np.ndarray
    coords: np.ndarray | None = None
    train_idx: np.ndarray | None = None
    test_idx: np.ndarray | None = None
    branch_norm: MinMaxNormalizer | None = None
    coords_norm: MinMaxNormalizer | None = None

    def __post_init__(self):
        self.branch_inputs = np.atleast_2d(np.asarray(self.branch_inputs, dtype=np.float64))
        self.targets = np.asarray(self.targets, dtype=np.float64)
        if self.coords is not None:
            self.coords = np.atleast_2d(np.asarray(self.coords, dtype=np.float64))
        if self.targets.shape[0] != self.branch_inputs.shape[0]:
            raise ValueError(
                f"{self.targets.shape[0]} target rows for "
                f"{self.branch_inputs.shape[0]} input rows"
            )
        if self.coords is not None and self.targets.shape[1] != self.coords.shape[0]:
            raise ValueError("targets and coords disagree on the number of points")
        if not np.all(np.isfinite(self.targets)):
            raise ValueError("targets contain non-finite values")
        if not np.all(np.isfinite(self.branch_inputs)):
            raise ValueError("branch inputs contain non-finite values")

    @property
    def num_samples(self) -> int:
        return self.branch_inputs.shape[0]

    def fit_normalizers(self) -> None:
        """Fit min-max stats on the training split (all samples if unsplit)."""
        idx = self.train_idx if self.train_idx is not None else np.arange(self.num_samples)
        self.branch_norm = MinMaxNormalizer.fit(self.branch_inputs[idx])
        if self.coords is not None:
            self.coords_norm = MinMaxNormalizer.fit(self.coords)


def split_dataset(dataset: Dataset, ratio: float = 0.8, seed: int = 0) -> Dataset:
    """Populate a seeded permutation split, train fraction ``ratio``.

    The two index sets are disjoint and together cover every sample.
    """
    if not 0 < ratio < 1:
        raise ValueError("ratio must lie strictly between 0 and 1")
    n = dataset.num_samples
    n_train = round(n * ratio)
    if n_train == 0 or n_train == n:
        raise ValueError(f"ratio {ratio} leaves an empty split for {n} samples")
    perm = make_rng(seed, stream=SPLIT_STREAM).permutation(n)
    dataset.train_idx = perm[:n_train]
    dataset.test_idx = perm[n_train:]
    return dataset
