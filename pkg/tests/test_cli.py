import json
import time
from pathlib import Path

import numpy as np
import pytest

from dyntda.analysis import snap_grid
from dyntda.cli import main
from dyntda.cliquecomplex import ThresholdRule, build_graph
from dyntda.config import load_config, preset_config, resolve
from dyntda.errors import ConfigError
from dyntda.pipeline import OUTPUT_FILES, sample_trajectory
from dyntda.presets import PRESETS, list_presets
from dyntda.quantumsim import pairwise_overlaps

EXAMPLE = Path(__file__).resolve().parent.parent / "docs" / "example.toml"


def write(tmp_path, text, name="cfg.toml"):
    path = tmp_path / name
    path.write_text(text)
    return path


def outputs(d):
    return {name: (d / name).read_bytes() for name in OUTPUT_FILES}


def test_catalog_lists_every_preset(capsys):
    names = [p.name for p in list_presets()]
    assert "pendulum-linearized" in names
    assert set(names) == {"pendulum-linearized", "harmonic-oscillator", "coupled-springs",
                          "decaying-spiral", "two-tori", "logistic-forced"}
    assert main(["presets"]) == 0
    listed = json.loads(capsys.readouterr().out)
    assert [p["name"] for p in listed] == names
    assert all(p["form"] and p["provenance"] for p in listed)
    assert main(["presets", "--format", "csv"]) == 0
    assert capsys.readouterr().out.startswith("name,form,provenance\n")


@pytest.mark.parametrize("name", list(PRESETS))
def test_preset_validates_and_runs(name, tmp_path, capsys):
    cfg = preset_config(name)
    assert cfg.mode == "exact"
    start = time.perf_counter()
    assert main(["run", name, "--out-dir", str(tmp_path / "out")]) == 0
    assert time.perf_counter() - start < 60
    summary = json.loads(capsys.readouterr().out)
    sig = json.loads((tmp_path / "out" / "signature.json").read_text())
    assert summary["label"] == sig["label"]
    if name == "pendulum-linearized":
        assert sig["label"] == "periodic-candidate"
    if name == "two-tori":
        assert sig["label"] == "quasi-periodic-candidate"


def test_output_schemas(tmp_path):
    out = tmp_path / "o"
    assert main(["run", "pendulum-linearized", "--out-dir", str(out)]) == 0
    traj = (out / "trajectory.csv").read_text().splitlines()
    assert traj[0] == "t,x1,x2" and len(traj) == 31
    rows = (out / "overlaps.csv").read_text().splitlines()
    assert len(rows) == 30 and all(len(r.split(",")) == 30 for r in rows)
    sweep = json.loads((out / "sweep.json").read_text())
    assert set(sweep) == {"metric", "r_max", "grid", "points"}
    assert set(sweep["points"][0]) == {"eps", "counts", "n_edges", "betti"}
    curves = (out / "betti_curves.csv").read_text().splitlines()
    assert curves[0] == "eps,r,s_r,betti,normalized"
    assert len(curves) == 1 + len(sweep["grid"]) * (sweep["r_max"])


def test_reruns_are_byte_identical(tmp_path):
    cfg = write(tmp_path, '''
preset = "pendulum-linearized"
[overlap]
mode = "swap_test"
shots = 2000
seed = 17
[sweep]
grid = {start = 0.05, stop = 0.45, num = 6}
[estimator]
enabled = true
''')
    assert main(["run", str(cfg), "--out-dir", str(tmp_path / "a")]) == 0
    assert main(["run", str(cfg), "--out-dir", str(tmp_path / "b")]) == 0
    assert outputs(tmp_path / "a") == outputs(tmp_path / "b")
    assert main(["run", str(cfg), "--seed", "18", "--out-dir", str(tmp_path / "c")]) == 0
    assert outputs(tmp_path / "a")["overlaps.csv"] != outputs(tmp_path / "c")["overlaps.csv"]


def test_exact_flag_overrides_mode(tmp_path):
    cfg = write(tmp_path, 'preset = "pendulum-linearized"\n[overlap]\nmode = "swap_test"\nshots = 10\n')
    assert main(["run", str(cfg), "--exact", "--out-dir", str(tmp_path / "x")]) == 0
    assert main(["run", "pendulum-linearized", "--out-dir", str(tmp_path / "y")]) == 0
    assert outputs(tmp_path / "x") == outputs(tmp_path / "y")


def test_out_dir_from_config_and_env(tmp_path, monkeypatch):
    cfg = write(tmp_path, 'preset = "pendulum-linearized"\n[output]\ndir = "here"\n')
    assert main(["run", str(cfg)]) == 0
    assert (tmp_path / "here" / "sweep.json").exists()
    monkeypatch.setenv("DYNTDA_OUT_DIR", str(tmp_path / "env"))
    assert main(["run", "pendulum-linearized"]) == 0
    assert (tmp_path / "env" / "sweep.json").exists()


def test_csv_summary(tmp_path, capsys):
    assert main(["run", "pendulum-linearized", "--format", "csv", "--out-dir", str(tmp_path)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("label,") and lines[1].startswith("periodic-candidate,")


@pytest.mark.parametrize("text", [
    'preset = "pendulum-linearized"\n[sampling]\nm = 500\n',
    'preset = "no-such-system"\n',
    'preset = "pendulum-linearized"\n[sweep]\ngrid = [0.3, 0.1]\n',
    'preset = "pendulum-linearized"\n[overlap]\nmode = "swap_test"\nshots = 0\n',
    'preset = "decaying-spiral"\n[overlap]\nmode = "swap_test"\nshots = 100\n',
    'preset = "pendulum-linearized"\n[sweep\n',
    '[system]\nkind = "linear"\nA = [[0.0]]\nx0 = [1.0, 2.0]\n[solver]\nscheme = "euler"\nt_end = 1.0\nn_steps = 4\n',
    'preset = "pendulum-linearized"\n[extra]\nx = 1\n',
])
def test_malformed_config_exits_2_without_outputs(text, tmp_path, capsys):
    cfg = write(tmp_path, text)
    out = tmp_path / "out"
    assert main(["run", str(cfg), "--out-dir", str(out)]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "ConfigError" and err["module"] == "cli"
    assert not out.exists()


def test_missing_target_exits_2(tmp_path):
    assert main(["run", str(tmp_path / "nope.toml")]) == 2


def test_pipeline_error_exits_1_with_module(tmp_path, capsys):
    # x' = x^2 from x0 = 1 blows up at t = 1
    cfg = write(tmp_path, '''
[system]
kind = "polynomial"
terms = [[[1.0, [2, 0]]]]
x0 = [1.0]
[solver]
scheme = "euler"
t_end = 50.0
n_steps = 50
[sampling]
m = 10
[sweep]
grid = [0.1, 0.2, 0.3, 0.4, 0.5]
''')
    out = tmp_path / "out"
    assert main(["run", str(cfg), "--out-dir", str(out)]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["module"] == "odesolve" and err["error"] == "DivergedError"
    assert not out.exists()


def test_inline_polynomial_config(tmp_path):
    cfg = write(tmp_path, '''
[system]
kind = "polynomial"
terms = [[[1.0, [0, 1, 0]]], [[-1.0, [1, 0, 0]]]]
x0 = [1.0, 0.0]
[solver]
scheme = "euler"
t_end = 6.0
n_steps = 600
[sampling]
times = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0]
[sweep]
grid = {start = 0.05, stop = 0.5, num = 6}
''')
    c = load_config(cfg)
    assert c.m == 7 and c.system.kind == "polynomial"
    assert main(["run", str(cfg), "--out-dir", str(tmp_path / "o")]) == 0


def test_example_config_runs(tmp_path):
    cfg = load_config(EXAMPLE)
    assert cfg.out_dir == EXAMPLE.parent / "out"
    assert main(["run", str(EXAMPLE), "--out-dir", str(tmp_path / "o")]) == 0


def test_times_must_be_grid_nodes():
    with pytest.raises(ConfigError):
        resolve({"preset": "pendulum-linearized", "sampling": {"times": [0.0, 0.0123]}})


@pytest.mark.parametrize("name", list(PRESETS))
def test_exact_and_million_shot_edges_agree(name):
    cfg = preset_config(name)
    traj = sample_trajectory(cfg)
    exact = pairwise_overlaps(traj)
    # the euclidean metric needs signed overlaps, which only the Hadamard test provides
    mode = "hadamard_test" if cfg.metric == "euclidean" else "swap_test"
    noisy = pairwise_overlaps(traj, mode, 10**6, 0)
    for eps in snap_grid(exact, cfg.metric, cfg.grid):
        rule = ThresholdRule(cfg.metric, eps)
        assert build_graph(exact, rule).edges == build_graph(noisy, rule).edges


def test_snapped_grid_ascending_for_presets():
    for name in PRESETS:
        cfg = preset_config(name)
        g = snap_grid(pairwise_overlaps(sample_trajectory(cfg)), cfg.metric, cfg.grid)
        assert len(g) == len(cfg.grid) and np.all(np.diff(g) > 0)
