"""Configuration, persistence, experiment orchestration and the CLI."""

from .config import ExperimentConfig, default_config, parse_config
from .experiment import build_dataset, build_model, evaluate_model, run_experiment
from .presets import EXPECTED_PARAMS, PRESET_NAMES, make_preset
from .storage import (
    emit_csv,
    load_checkpoint,
    load_dataset,
    read_record,
    save_checkpoint,
    save_dataset,
    write_record,
)

__all__ = [
    "ExperimentConfig",
    "default_config",
    "parse_config",
    "build_dataset",
    "build_model",
    "evaluate_model",
    "run_experiment",
    "EXPECTED_PARAMS",
    "PRESET_NAMES",
    "make_preset",
    "emit_csv",
    "load_checkpoint",
    "load_dataset",
    "read_record",
    "save_checkpoint",
    "save_dataset",
    "write_record",
]
