"""End-to-end command-line behavior and exit codes."""

import subprocess
import sys

import numpy as np
import pytest

from deepokan.cli.main import main
from deepokan.cli.storage import load_checkpoint, load_dataset
from deepokan.kan import KanNetwork


def _tiny_wave_config(tmp_path, out, extra_training=""):
    path = tmp_path / "tiny.ini"
    path.write_text(
        f"""
[experiment]
tag = wave1
family = rbf_kan
out = {out}

[architecture]
hidden = 6, 6
m = 4

[training]
optimizer = adam
lr = 1e-2
epochs = 4
batch_size = 50
{extra_training}

[dataset]
num_points = 50
"""
    )
    return str(path)


def _tiny_operator_config(tmp_path, out):
    path = tmp_path / "op.ini"
    path.write_text(
        f"""
[experiment]
tag = wave_operator
family = deepokan
out = {out}

[architecture]
hidden = 6
r = 3
m = 4

[training]
optimizer = adam
lr = 1e-3
epochs = 2
batch_size = 4

[dataset]
num_samples = 10
num_points = 12
"""
    )
    return str(path)


# ----------------------------------------------------------------- commands


def test_generate(tmp_path, capsys):
    out = tmp_path / "run"
    code = main(["generate", "--config", _tiny_wave_config(tmp_path, out)])
    assert code == 0
    assert "wrote 50 samples" in capsys.readouterr().out
    ds = load_dataset(out / "dataset.dokn")
    assert ds.num_samples == 50


def test_train_evaluate_report_cycle(tmp_path, capsys):
    out = tmp_path / "run"
    config = _tiny_operator_config(tmp_path, out)

    assert main(["train", "--config", config]) == 0
    printed = capsys.readouterr().out
    assert "trainable parameters" in printed
    assert "trained 4 epochs" not in printed  # operator config trains 2
    assert (out / "loss.csv").exists()
    assert (out / "checkpoint.dokn").exists()
    model = load_checkpoint(out / "checkpoint.dokn")
    assert isinstance(model.branch, KanNetwork)

    assert main(["evaluate", "--config", config]) == 0
    printed = capsys.readouterr().out
    assert "test samples: 2" in printed
    assert (out / "summary.csv").exists()
    assert (out / "errors.csv").exists()
    assert (out / "loss.csv").exists()  # evaluate must not clobber the train log

    assert main(["report", "--config", config]) == 0
    printed = capsys.readouterr().out
    assert "epochs: 2" in printed
    assert "test errors" in printed


def test_train_reuses_stored_dataset(tmp_path, capsys):
    out = tmp_path / "run"
    config = _tiny_wave_config(tmp_path, out)
    assert main(["generate", "--config", config]) == 0
    before = (out / "dataset.dokn").read_bytes()
    assert main(["train", "--config", config]) == 0
    assert (out / "dataset.dokn").read_bytes() == before
    capsys.readouterr()


def test_out_flag_overrides_config(tmp_path, capsys):
    out = tmp_path / "cfg_dir"
    other = tmp_path / "flag_dir"
    config = _tiny_wave_config(tmp_path, out)
    assert main(["train", "--config", config, "--out", str(other)]) == 0
    assert (other / "loss.csv").exists()
    assert not out.exists()
    capsys.readouterr()


def test_seed_flag_changes_training(tmp_path, capsys):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    out_c = tmp_path / "c"
    config = _tiny_wave_config(tmp_path, tmp_path / "unused", "")
    for out, seed in ((out_a, "1"), (out_b, "2"), (out_c, "1")):
        assert main(["train", "--config", config, "--seed", seed, "--out", str(out)]) == 0
    capsys.readouterr()
    same = (out_a / "checkpoint.dokn").read_bytes() == (out_c / "checkpoint.dokn").read_bytes()
    differs = (out_a / "checkpoint.dokn").read_bytes() != (out_b / "checkpoint.dokn").read_bytes()
    assert same and differs


# --------------------------------------------------------------- exit codes


def test_exit_1_on_missing_config(tmp_path, capsys):
    assert main(["train", "--config", str(tmp_path / "none.ini")]) == 1
    assert "error" in capsys.readouterr().err


def test_exit_1_on_bad_config(tmp_path, capsys):
    path = tmp_path / "bad.ini"
    path.write_text("[experiment]\ntag = wave1\nfamily = mlp\nwhatever = 3\n")
    assert main(["train", "--config", str(path)]) == 1
    assert "unknown key" in capsys.readouterr().err


def test_exit_1_on_usage_errors(capsys):
    assert main([]) == 1
    assert main(["explode", "--config", "x.ini"]) == 1
    assert main(["train"]) == 1  # --config is required
    capsys.readouterr()


def test_exit_1_on_report_without_run(tmp_path, capsys):
    config = _tiny_wave_config(tmp_path, tmp_path / "empty")
    assert main(["report", "--config", config]) == 1
    assert "run train first" in capsys.readouterr().err


@pytest.mark.filterwarnings("ignore:overflow")
def test_exit_2_on_divergence(tmp_path, capsys):
    out = tmp_path / "run"
    config = _tiny_wave_config(tmp_path, out, "")
    # rewrite with an absurd learning rate that overflows the forward pass
    text = (tmp_path / "tiny.ini").read_text().replace("lr = 1e-2", "lr = 1e200")
    (tmp_path / "tiny.ini").write_text(text)
    assert main(["train", "--config", config]) == 2
    assert "aborted" in capsys.readouterr().err
    # the partial artifacts still land for post-mortems
    assert (out / "loss.csv").exists()
    assert (out / "checkpoint.dokn").exists()


# ------------------------------------------------------------ installed CLI


def test_console_script_round_trip(tmp_path):
    out = tmp_path / "run"
    config = _tiny_wave_config(tmp_path, out)
    proc = subprocess.run(
        [sys.executable, "-m", "deepokan.cli.main", "train", "--config", config],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert "trainable parameters" in proc.stdout

    proc = subprocess.run(
        [sys.executable, "-m", "deepokan.cli.main", "report", "--config", config],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "epochs: 4" in proc.stdout


def test_console_script_usage_error():
    proc = subprocess.run(
        [sys.executable, "-m", "deepokan.cli.main", "train"], capture_output=True, text=True
    )
    assert proc.returncode == 1
