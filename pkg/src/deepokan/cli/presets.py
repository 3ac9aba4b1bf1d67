"""Named experiment presets mirroring the benchmark table in the README.

Each preset is a ready-to-run ExperimentConfig. EXPECTED_PARAMS pins the
trainable-parameter total of every preset; a drifting architecture breaks
the guard test instead of silently training a different model.

A note on the wave-operator KAN variant: at widths (50, 50) with r = 40
the parameter total is set by the kernel count m, and the preset keeps
the global m = 5 for 46000 parameters; no integer m lands anywhere near
the dense baseline's 275880, so the two are budget-matched only loosely.
"""

from __future__ import annotations

from dataclasses import replace

from .config import ExperimentConfig, default_config

# hidden widths per complexity level: (deepokan n, deeponet n)
ORTHO_WIDTHS = {"low": (14, 62), "med": (80, 358), "high": (190, 855)}
POISSON_WIDTHS = {"low": (5, 25), "med": (10, 50), "high": (20, 100)}


def _preset(tag: str, family: str, hidden: tuple[int, ...] | None = None) -> ExperimentConfig:
    config = default_config(tag, family)
    if hidden is not None:
        config = replace(config, hidden=hidden)
    return config


def make_preset(name: str) -> ExperimentConfig:
    """Fresh config for a preset name; see PRESET_NAMES for the catalog."""
    if name not in _BUILDERS:
        raise ValueError(f"unknown preset '{name}'; available: {', '.join(PRESET_NAMES)}")
    tag, family, hidden = _BUILDERS[name]
    config = _preset(tag, family, hidden)
    config.out_dir = f"runs/{name}"
    return config


def _build_catalog():
    builders = {
        "wave1_kan": ("wave1", "rbf_kan", None),
        "wave1_mlp": ("wave1", "mlp", None),
        "wave2_kan": ("wave2", "rbf_kan", None),
        "wave2_mlp": ("wave2", "mlp", None),
        "wave_operator_deepokan": ("wave_operator", "deepokan", None),
        "wave_operator_deeponet": ("wave_operator", "deeponet", None),
    }
    for level, (n_kan, n_mlp) in ORTHO_WIDTHS.items():
        builders[f"ortho_{level}_deepokan"] = ("ortho", "deepokan", (n_kan,))
        builders[f"ortho_{level}_deeponet"] = ("ortho", "deeponet", (n_mlp,))
    for level, (n_kan, n_mlp) in POISSON_WIDTHS.items():
        builders[f"poisson_{level}_deepokan"] = ("poisson", "deepokan", (n_kan,))
        builders[f"poisson_{level}_deeponet"] = ("poisson", "deeponet", (n_mlp,))
    return builders


_BUILDERS = _build_catalog()
PRESET_NAMES = tuple(sorted(_BUILDERS))

EXPECTED_PARAMS = {
    "wave1_kan": 640,
    "wave1_mlp": 673,
    "wave2_kan": 640,
    "wave2_mlp": 673,
    "wave_operator_deepokan": 46000,
    "wave_operator_deeponet": 275880,
    "ortho_low_deepokan": 1260,
    "ortho_low_deeponet": 1250,
    "ortho_med_deepokan": 7200,
    "ortho_med_deeponet": 7170,
    "ortho_high_deepokan": 17100,
    "ortho_high_deeponet": 17110,
    "poisson_low_deepokan": 12650,
    "poisson_low_deeponet": 13104,
    "poisson_med_deepokan": 25300,
    "poisson_med_deeponet": 25804,
    "poisson_high_deepokan": 50600,
    "poisson_high_deeponet": 51204,
}
