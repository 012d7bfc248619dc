import csv
import json
import shutil
import subprocess
import sys

import numpy as np
import pytest

from multicut_lab import is_feasible, read_mcg, write_mcg
from multicut_lab.cli import main
from multicut_lab.formats import read_sol
from multicut_lab.gnn import ModelConfig, MulticutGNN, save_checkpoint


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def last_json(out):
    return json.loads(out.strip().splitlines()[-1])


def rows(path):
    return list(csv.reader(open(path)))


@pytest.fixture
def tri_file(tmp_path, triangle):
    path = tmp_path / "tri.mcg"
    write_mcg(triangle, path)
    return path


@pytest.fixture
def checkpoint(tmp_path):
    path = tmp_path / "m.json"
    save_checkpoint(MulticutGNN(ModelConfig(depth=2, width=4), 0), path)
    return path


@pytest.fixture(scope="module")
def small_dataset(tmp_path_factory):
    out = tmp_path_factory.mktemp("data") / "d"
    assert main(["generate", "--kind", "irismp-s", "--count", "6", "--seed", "7", "--out", str(out)]) == 0
    return out


def test_generate(small_dataset, tmp_path, capsys):
    manifest = json.loads((small_dataset / "manifest.json").read_text())
    assert manifest["count"] == 6 and manifest["label_source"] == "Exact"
    assert len(list(small_dataset.glob("*.sol"))) == 6
    code, out, _ = run(capsys, "generate", "--kind", "scaling", "--nodes", "500", "--out", tmp_path / "s")
    assert code == 0
    assert read_mcg(tmp_path / "s" / "000000.mcg").node_count == 500
    assert last_json(out)["label_source"] == "None"


def test_generate_usage_errors(tmp_path, capsys):
    assert run(capsys, "generate", "--kind", "irismp")[0] == 2
    assert run(capsys, "generate", "--kind", "bsds", "--out", tmp_path)[0] == 2
    code, _, err = run(capsys, "generate", "--kind", "scaling", "--out", tmp_path / "x")
    assert code == 2 and "--nodes" in err
    assert run(capsys, "generate", "--kind", "irismp", "--nodes", "5", "--out", tmp_path / "x")[0] == 2
    assert run(capsys, "generate", "--kind", "irismp", "--count", "0", "--out", tmp_path / "x")[0] == 2
    assert run(capsys)[0] == 2


def test_generate_label_too_large_is_runtime_error(tmp_path, capsys):
    code, _, err = run(capsys, "generate", "--kind", "irismp", "--label", "exact", "--out", tmp_path / "x")
    assert code == 1 and "TooLarge" in err


def test_seed_env_fallback(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("MULTICUT_LAB_SEED", "7")
    assert run(capsys, "generate", "--kind", "irismp", "--count", "2", "--out", tmp_path / "env")[0] == 0
    monkeypatch.delenv("MULTICUT_LAB_SEED")
    assert run(capsys, "generate", "--kind", "irismp", "--count", "2", "--seed", "7", "--out", tmp_path / "arg")[0] == 0
    for name in ("000000.mcg", "000001.mcg", "manifest.json"):
        assert (tmp_path / "env" / name).read_bytes() == (tmp_path / "arg" / name).read_bytes()
    monkeypatch.setenv("MULTICUT_LAB_SEED", "seven")
    assert run(capsys, "generate", "--kind", "irismp", "--out", tmp_path / "bad")[0] == 2


def test_solve_exact_and_gaec(tri_file, tmp_path, capsys):
    code, out, _ = run(capsys, "solve", "--solver", "exact", "--graph", tri_file)
    line = last_json(out)
    assert code == 0 and line["objective"] == -10.0 and line["status"] == "Optimal"
    y, obj = read_sol(tmp_path / "tri.sol", 3)
    assert y.tolist() == [1, 1, 0] and obj == -10.0
    code, out, _ = run(capsys, "solve", "--solver", "gaec", "--graph", tri_file, "--out", tmp_path / "g.sol")
    assert code == 0 and last_json(out)["objective"] == -10.0


def test_solve_gaec_budget(tmp_path, capsys):
    assert run(capsys, "generate", "--kind", "scaling", "--nodes", "2000", "--out", tmp_path / "s")[0] == 0
    graph = tmp_path / "s" / "000000.mcg"
    code, out, _ = run(capsys, "solve", "--solver", "gaec", "--graph", graph, "--budget", "0.000001",
                       "--out", tmp_path / "b.sol")
    assert code == 0 and last_json(out)["status"] == "BudgetExpired"
    g = read_mcg(graph)
    y, _ = read_sol(tmp_path / "b.sol", g.edge_count)
    assert is_feasible(g, y)


def test_solve_gnn(tri_file, checkpoint, tmp_path, capsys):
    code, out, _ = run(capsys, "solve", "--solver", "gnn", "--graph", tri_file, "--model", checkpoint,
                       "--l", 3, "--embeddings", tmp_path / "h.csv", "--out", tmp_path / "n.sol")
    line = last_json(out)
    assert code == 0 and "feasible_before_rounding" in line and "violations" in line
    y, _ = read_sol(tmp_path / "n.sol", 3)
    assert is_feasible(read_mcg(tri_file), y)
    assert rows(tmp_path / "h.csv")[0] == ["node_id", "h0", "h1", "h2", "h3"]


def test_solve_errors(tri_file, tmp_path, capsys):
    assert run(capsys, "solve", "--solver", "gnn", "--graph", tri_file)[0] == 2
    assert run(capsys, "solve", "--solver", "exact", "--graph", tmp_path / "none.mcg")[0] == 1
    (tmp_path / "bad.mcg").write_text("p mc 2 x\n")
    code, _, err = run(capsys, "solve", "--solver", "exact", "--graph", tmp_path / "bad.mcg")
    assert code == 1 and "bad.mcg:1" in err
    (tmp_path / "ck.json").write_text("{}")
    assert run(capsys, "solve", "--solver", "gnn", "--graph", tri_file, "--model", tmp_path / "ck.json")[0] == 1
    code, _, err = run(capsys, "solve", "--solver", "exact", "--graph", tri_file, "--exact-cap", 2)
    assert code == 1 and "TooLarge" in err


def test_train_and_eval(small_dataset, tmp_path, capsys):
    shutil.copytree(small_dataset, tmp_path / "d")
    cfg = {"train_dataset": "d", "eval_dataset": "d", "model": {"depth": 2, "width": 4},
           "epochs": 3, "batch_size": 2, "eval_every": 2, "alpha": 0.01, "max_cycle_length": 3}
    (tmp_path / "cfg.json").write_text(json.dumps(cfg))
    code, out, _ = run(capsys, "train", "--config", tmp_path / "cfg.json", "--out", tmp_path / "ck.json")
    assert code == 0
    curves = rows(tmp_path / "ck.json.curves.csv")
    steps = [int(r[0]) for r in curves[1:]]
    assert curves[0][0] == "step" and steps == sorted(set(steps)) and steps[-1] == 9

    code, out, _ = run(capsys, "eval", "--model", tmp_path / "ck.json", "--dataset", tmp_path / "d",
                       "--out", tmp_path / "gnn.csv")
    assert code == 0
    table = rows(tmp_path / "gnn.csv")
    assert len(table) == 1 + 6 + 1 and table[-1][0] == "summary"
    assert all(r[1] == "gnn" for r in table[1:])
    assert 0.0 <= last_json(out)["mean_ratio"] <= 1.0


def test_eval_exact_self_comparison(small_dataset, tmp_path, capsys):
    code, out, _ = run(capsys, "eval", "--solver", "exact", "--dataset", small_dataset, "--out", tmp_path / "e.csv")
    assert code == 0
    table = rows(tmp_path / "e.csv")
    assert table[0][4] == "ratio"
    assert [float(r[4]) for r in table[1:]] == [1.0] * 7
    assert float(table[-1][5]) == 1.0
    summary = last_json(out)
    assert summary["mean_ratio"] == 1.0 and summary["harmonic_mean"] == 1.0


def test_eval_parallel_matches_serial(small_dataset, tmp_path, capsys):
    run(capsys, "eval", "--solver", "gaec", "--dataset", small_dataset, "--out", tmp_path / "a.csv")
    run(capsys, "eval", "--solver", "gaec", "--dataset", small_dataset, "--out", tmp_path / "b.csv", "--jobs", 2)
    a, b = rows(tmp_path / "a.csv"), rows(tmp_path / "b.csv")
    strip = lambda t: [r[:7] + r[8:] for r in t]  # noqa: E731  (wall time differs)
    assert strip(a) == strip(b)


def test_eval_and_train_errors(tmp_path, capsys):
    assert run(capsys, "eval", "--solver", "gnn", "--dataset", tmp_path, "--out", tmp_path / "x.csv")[0] == 2
    assert run(capsys, "eval", "--dataset", tmp_path / "missing", "--out", tmp_path / "x.csv")[0] == 1
    (tmp_path / "cfg.json").write_text(json.dumps({"epochs": 0}))
    code, _, err = run(capsys, "train", "--config", tmp_path / "cfg.json", "--out", tmp_path / "c.json")
    assert code == 1 and "BadConfig" in err
    run(capsys, "generate", "--kind", "irismp", "--count", "2", "--out", tmp_path / "u")
    (tmp_path / "cfg.json").write_text(json.dumps({"train_dataset": "u"}))
    code, _, err = run(capsys, "train", "--config", tmp_path / "cfg.json", "--out", tmp_path / "c.json")
    assert code == 1 and "MissingLabels" in err


def test_scale(tmp_path, capsys):
    code, _, _ = run(capsys, "scale", "--solver", "exact", "--sizes", "10,1000", "--out", tmp_path / "x.csv",
                     "--repeats", 1)
    assert code == 0
    table = rows(tmp_path / "x.csv")
    assert table[0] == ["nodes", "edges", "solver", "objective", "wall_time", "repeats", "status"]
    assert table[1][6] == "Optimal" and table[2][6] == "TooLarge"
    code, _, _ = run(capsys, "scale", "--solver", "gnn", "--sizes", "50,100", "--out", tmp_path / "g.csv")
    assert code == 0 and len(rows(tmp_path / "g.csv")) == 3
    assert run(capsys, "scale", "--solver", "gaec", "--sizes", "1", "--out", tmp_path / "y.csv")[0] == 2


def test_console_script_entry_point(tmp_path, triangle):
    write_mcg(triangle, tmp_path / "t.mcg")
    exe = shutil.which("multicut-lab")
    cmd = [exe] if exe else [sys.executable, "-m", "multicut_lab.cli"]
    proc = subprocess.run(cmd + ["solve", "--solver", "exact", "--graph", str(tmp_path / "t.mcg")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["objective"] == -10.0
    proc = subprocess.run(cmd + ["solve"], capture_output=True, text=True)
    assert proc.returncode == 2 and "usage" in proc.stderr
    assert np.isclose(json.loads(subprocess.run(
        cmd + ["solve", "--solver", "gaec", "--graph", str(tmp_path / "t.mcg")],
        capture_output=True, text=True).stdout)["objective"], -10.0)
