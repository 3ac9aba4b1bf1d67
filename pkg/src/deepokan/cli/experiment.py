"""Experiment orchestration: dataset, model, training, evaluation, artifacts."""

from __future__ import annotations

import time
from pathlib import Path

import numpy as np

from .. import metrics
from ..datagen import (
    Dataset,
    gen_ortho_dataset,
    gen_poisson_dataset,
    gen_wave1,
    gen_wave2,
    gen_wave_operator_dataset,
)
from ..datagen.waves import wave_regression_dataset
from ..kan import KanNetwork
from ..mlp import MlpNetwork
from ..operator import OperatorModel
from ..optim import train
from ..report import RunReport
from .config import OPERATOR_DIMS, POISSON_STEPS, ExperimentConfig
from .storage import emit_csv, load_dataset, save_checkpoint, save_dataset

HISTOGRAM_BINS = 20


def build_dataset(config: ExperimentConfig) -> Dataset:
    """Generate the experiment's dataset and fit normalization stats."""
    if config.tag == "wave1":
        ds = wave_regression_dataset(*gen_wave1(config.num_points))
    elif config.tag == "wave2":
        ds = wave_regression_dataset(*gen_wave2(config.num_points))
    elif config.tag == "wave_operator":
        ds = gen_wave_operator_dataset(config.num_samples, config.num_points, config.data_seed)
    elif config.tag == "ortho":
        ds = gen_ortho_dataset(config.num_samples, config.data_seed, config.nx, config.ny)
    else:
        ds = gen_poisson_dataset(
            config.num_samples, config.data_seed, config.nx, config.ny, config.t_final
        )
    if config.is_operator:
        ds.fit_normalizers()
    return ds


def dataset_path(config: ExperimentConfig) -> Path:
    return Path(config.out_dir) / "dataset.dokn"


def checkpoint_path(config: ExperimentConfig) -> Path:
    return Path(config.out_dir) / "checkpoint.dokn"


def ensure_dataset(config: ExperimentConfig) -> Dataset:
    """Load the run directory's dataset if present, else generate and save it."""
    path = dataset_path(config)
    if path.exists():
        return load_dataset(path)
    ds = build_dataset(config)
    path.parent.mkdir(parents=True, exist_ok=True)
    save_dataset(ds, path)
    return ds


def build_model(config: ExperimentConfig, dataset: Dataset | None = None):
    """Instantiate the configured network or operator pair.

    Branch and trunk take distinct derived seeds so their initial weights
    differ; an attached dataset supplies the normalization statistics.
    """
    seed = config.train.seed
    grid = (config.grid_min, config.grid_max)
    if not config.is_operator:
        dims = [1, *config.hidden, 1]
        if config.family == "rbf_kan":
            return KanNetwork.create(
                dims, m=config.m, grid_range=grid, seed=seed, learnable_centers=config.learnable_centers
            )
        return MlpNetwork.create(dims, seed=seed)
    branch_in, trunk_in = OPERATOR_DIMS[config.tag]
    time_steps = POISSON_STEPS if config.mode == "transient" else None
    branch_out = config.r * (time_steps or 1)
    branch_dims = [branch_in, *config.hidden, branch_out]
    trunk_dims = [trunk_in, *config.hidden, config.r]
    if config.family == "deepokan":
        branch = KanNetwork.create(
            branch_dims, m=config.m, grid_range=grid, seed=2 * seed,
            learnable_centers=config.learnable_centers,
        )
        trunk = KanNetwork.create(
            trunk_dims, m=config.m, grid_range=grid, seed=2 * seed + 1,
            learnable_centers=config.learnable_centers,
        )
    else:
        branch = MlpNetwork.create(branch_dims, seed=2 * seed)
        trunk = MlpNetwork.create(trunk_dims, seed=2 * seed + 1)
    return OperatorModel(
        branch,
        trunk,
        r=config.r,
        mode=config.mode,
        time_steps=time_steps,
        bias=0.0 if config.bias else None,
        branch_norm=dataset.branch_norm if dataset is not None else None,
        trunk_norm=dataset.coords_norm if dataset is not None else None,
    )


def evaluate_model(config: ExperimentConfig, model, dataset: Dataset, report: RunReport) -> list:
    """Fill the report's test metrics; returns field frames for CSV emission.

    Evaluation runs on the test split; the wave regressions have no held-out
    points and are scored on their full training grid instead. Probe indices
    select positions within the evaluated set.
    """
    if dataset.test_idx is not None and dataset.test_idx.size > 0:
        eval_idx = np.asarray(dataset.test_idx, dtype=np.int64)
    else:
        eval_idx = np.arange(dataset.num_samples)
    if isinstance(model, OperatorModel):
        truth = dataset.targets[eval_idx]
        preds = model.predict(dataset.branch_inputs[eval_idx], dataset.coords)
        flat_t = truth.reshape(truth.shape[0], -1)
        flat_p = preds.reshape(preds.shape[0], -1)
        errors = np.array([metrics.l2_error(t, p) for t, p in zip(flat_t, flat_p)])
    else:
        truth = dataset.targets[eval_idx]
        preds = model.predict(dataset.branch_inputs[eval_idx])
        errors = np.array([metrics.l2_error(t, p) for t, p in zip(truth, preds)])
    report.sample_errors = errors
    report.sample_ids = eval_idx
    report.error_summary = metrics.summarize_errors(errors)
    report.histogram = metrics.histogram(errors, HISTOGRAM_BINS)

    frames = []
    if config.tag in ("ortho", "poisson"):
        for pos in config.probe_samples:
            if not 0 <= pos < eval_idx.size:
                raise ValueError(f"probe sample {pos} outside the evaluated range")
            if config.tag == "ortho":
                frames.append((pos, 0, dataset.coords, truth[pos], preds[pos]))
            else:
                for t_idx in config.probe_times:
                    if not 0 <= t_idx < POISSON_STEPS:
                        raise ValueError(f"probe time {t_idx} outside the time range")
                    frames.append(
                        (pos, t_idx, dataset.coords, truth[pos][:, t_idx], preds[pos][:, t_idx])
                    )
    return frames


def run_experiment(config: ExperimentConfig) -> RunReport:
    """Dataset, model, training, evaluation, artifacts; deterministic per config."""
    start = time.perf_counter()
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    dataset = ensure_dataset(config)
    model = build_model(config, dataset)
    print(f"{config.tag}/{config.family}: {model.param_count()} trainable parameters")
    report = train(model, dataset, config.train)
    save_checkpoint(model, checkpoint_path(config))
    report.checkpoint_path = str(checkpoint_path(config))
    if report.abort_reason is None:
        frames = evaluate_model(config, model, dataset, report)
    else:
        frames = []
    report.wall_clock = time.perf_counter() - start
    emit_csv(report, out, field_frames=frames)
    return report
