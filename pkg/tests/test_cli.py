import json
import subprocess
import sys

import numpy as np
import pytest

from bosonbound.cli import main
from bosonbound.io import loads_matrix, loads_network, save_matrix
from bosonbound.interferometer import compose


@pytest.fixture
def bs_file(tmp_path, beamsplitter):
    path = tmp_path / "bs.json"
    save_matrix(path, beamsplitter)
    return str(path)


def test_dist_hom(bs_file, capsys):
    assert main(["dist", "--matrix", bs_file, "--photons", "2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "outcome,probability"
    probs = [float(l.split(",")[1]) for l in lines[1:]]
    assert probs == pytest.approx([0.5, 0.0, 0.5], abs=1e-12)


def test_dist_distinguishable_json(bs_file, capsys):
    assert main(["dist", "--matrix", bs_file, "--photons", "2", "--distinguishable", "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert [r["outcome"] for r in rows] == ["2|0", "1|1", "0|2"]
    assert rows[1]["probability"] == pytest.approx(0.5, abs=1e-12)


def test_sample(capsys):
    assert main(["sample", "--modes", "3", "--photons", "2", "--count", "7", "--seed", "2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "outcome" and len(lines) == 8
    assert all(sum(map(int, l.split("|"))) == 2 for l in lines[1:])


def test_lift_and_decompose(tmp_path, capsys):
    out = tmp_path / "lift.json"
    assert main(["lift", "--modes", "3", "--photons", "2", "--out", str(out)]) == 0
    assert loads_matrix(out.read_text()).shape == (6, 6)
    assert main(["decompose", "--modes", "4", "--seed", "5"]) == 0
    net = loads_network(capsys.readouterr().out)
    assert net.m == 4 and compose(net).shape == (4, 4)


def test_sweep_zero_eps(tmp_path, capsys):
    out = tmp_path / "s.csv"
    code = main(["sweep", "--photons", "1", "2", "--modes", "3", "--epsilon-list", "0", "--trials", "2",
                 "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 5
    header = lines[0].split(",")
    for line in lines[1:]:
        row = dict(zip(header, line.split(",")))
        assert all(float(row[k]) == 0 for k in ("l1", "tv", "trace", "euclid", "op_lifted", "op_base"))
        assert row["chain_ok"] == "true"
    assert "0 chain violations" in capsys.readouterr().err


def test_sweep_deterministic(tmp_path):
    argv = ["sweep", "--photons", "2", "--modes", "3", "4", "--epsilon", "0.01", "0.1", "--trials", "3",
            "--seed", "9"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_gaussian_sweep_projected(capsys):
    code = main(["sweep", "--photons", "2", "--modes", "3", "--epsilon", "0.1", "--trials", "2",
                 "--noise-model", "gaussian", "--project-unitary", "--format", "json"])
    assert code == 0
    rows = json.loads(capsys.readouterr().out)
    assert {r["model"] for r in rows} == {"gaussian+projected"}


def test_component_sweep(capsys):
    code = main(["component-sweep", "--photons", "2", "--modes", "4", "--epsilon", "0.01", "--trials", "2"])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert all(l.split(",")[5] == "5" for l in lines[1:])


def test_tightness_and_gauss_norm(capsys):
    assert main(["tightness", "--photons", "1", "--modes", "2", "--epsilon", "0.1", "--trials", "5"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "ratio,seed,trials_used" and out[1].endswith(",5")
    assert main(["gauss-norm", "--modes", "16", "--trials", "10"]) == 0
    assert 1.5 < float(capsys.readouterr().out) < 2.5


@pytest.mark.parametrize(
    "argv",
    [
        ["sweep", "--bogus"],
        ["nope"],
        [],
        ["dist", "--photons", "2"],
        ["sweep", "--photons", "5", "--modes", "2", "--epsilon", "0.1"],
        ["sweep", "--photons", "1", "--modes", "2", "--epsilon", "3"],
        ["dist", "--matrix", "/nonexistent.json", "--photons", "1"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bosonbound", "dist", "--modes", "2", "--photons", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("outcome,probability")


def test_invariant_violation_exits_1(monkeypatch, capsys):
    import bosonbound.cli as cli

    monkeypatch.setattr(cli, "violations", lambda rows: 1)
    assert main(["sweep", "--photons", "1", "--modes", "2", "--epsilon", "0.1", "--trials", "1"]) == 1
