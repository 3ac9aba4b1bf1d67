"""Error metrics and summary statistics for model evaluation.

Per-sample errors are Euclidean norms of prediction minus truth; summaries
report mean, population standard deviation and quartiles (linear
interpolation between order statistics). Histograms use equal-width bins
over the data range with a right-closed last bin, matching numpy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class ErrorSummary:
    mean: float
    std_deviation: float
    median: float
    p25: float
    p75: float

    FIELDS = ("mean", "std_deviation", "median", "p25", "p75")

    def as_row(self) -> list[float]:
        return [self.mean, self.std_deviation, self.median, self.p25, self.p75]


def l2_error(target, prediction) -> float:
    """Euclidean norm of the elementwise difference."""
    t = np.asarray(target, dtype=np.float64).ravel()
    p = np.asarray(prediction, dtype=np.float64).ravel()
    if t.shape != p.shape:
        raise ValueError(f"length mismatch: {t.shape} vs {p.shape}")
    return float(np.linalg.norm(t - p))


def summarize_errors(errors) -> ErrorSummary:
    arr = np.asarray(errors, dtype=np.float64).ravel()
    if arr.size == 0:
        raise ValueError("cannot summarize an empty error sequence")
    p25, median, p75 = np.percentile(arr, [25, 50, 75])
    return ErrorSummary(
        mean=float(arr.mean()),
        std_deviation=float(arr.std()),  # population (1/N) convention
        median=float(median),
        p25=float(p25),
        p75=float(p75),
    )


def histogram(values, num_bins: int) -> tuple[np.ndarray, np.ndarray]:
    """Bin edges (num_bins + 1) and counts (num_bins); counts sum to len(values)."""
    arr = np.asarray(values, dtype=np.float64).ravel()
    if arr.size == 0:
        raise ValueError("cannot histogram an empty sequence")
    if num_bins < 1:
        raise ValueError("num_bins must be at least 1")
    counts, edges = np.histogram(arr, bins=num_bins)
    return edges, counts
