"""Preset catalog invariants and the pinned parameter totals."""

import pathlib

import pytest

from deepokan.cli.config import parse_config
from deepokan.cli.experiment import build_model
from deepokan.cli.presets import EXPECTED_PARAMS, PRESET_NAMES, make_preset

CONFIG_DIR = pathlib.Path(__file__).resolve().parents[1] / "configs"


def test_catalog_is_complete():
    assert len(PRESET_NAMES) == 18
    assert set(EXPECTED_PARAMS) == set(PRESET_NAMES)
    assert PRESET_NAMES == tuple(sorted(PRESET_NAMES))


def test_unknown_preset_rejected():
    with pytest.raises(ValueError, match="unknown preset"):
        make_preset("wave3_kan")


def test_presets_are_fresh_instances():
    a = make_preset("ortho_low_deepokan")
    b = make_preset("ortho_low_deepokan")
    assert a is not b
    a.r = 99
    assert b.r == 5


def test_preset_out_dirs():
    for name in PRESET_NAMES:
        assert make_preset(name).out_dir == f"runs/{name}"


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_preset_parameter_totals(name):
    model = build_model(make_preset(name))
    assert model.param_count() == EXPECTED_PARAMS[name]


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_shipped_config_files_match_presets(name):
    path = CONFIG_DIR / f"{name}.ini"
    assert path.exists(), f"missing {path}"
    cfg = parse_config(path)
    preset = make_preset(name)
    assert cfg.tag == preset.tag and cfg.family == preset.family
    assert cfg.hidden == preset.hidden
    assert cfg.r == preset.r and cfg.m == preset.m
    assert cfg.train == preset.train
    assert cfg.num_samples == preset.num_samples
    assert cfg.num_points == preset.num_points
