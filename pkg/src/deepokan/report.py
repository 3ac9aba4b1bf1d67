"""Run report shared by the training loop and the experiment runner."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .metrics import ErrorSummary


@dataclass
class RunReport:
    """What a training run produced.

    ``loss_history`` holds one (epoch, lr, train_rmsd) row per completed
    epoch; a truncated history plus ``abort_reason`` records divergence.
    Evaluation fields are filled by the experiment runner, not by
    ``optim.train`` itself.
    """

    loss_history: list[tuple[int, float, float]] = field(default_factory=list)
    abort_reason: str | None = None
    checkpoint_path: str | None = None
    error_summary: ErrorSummary | None = None
    sample_errors: np.ndarray | None = None
    sample_ids: np.ndarray | None = None
    histogram: tuple[np.ndarray, np.ndarray] | None = None
    wall_clock: float | None = None

    @property
    def final_loss(self) -> float | None:
        if not self.loss_history:
            return None
        return self.loss_history[-1][2]
