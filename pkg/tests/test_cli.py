import json
import subprocess
import sys

import pytest

from infodens.cli import SCAN_COLUMNS, read_scan_csv, run


def _body(path):
    return [ln for ln in path.read_text().splitlines() if not ln.startswith("#")]


def test_gaussian(capsys):
    assert run(["gaussian", "--sigma", "1.0"]) == 0
    out = capsys.readouterr().out
    assert "E = 0.282094792" in out.splitlines()


def test_unknown_flag_exit_one_with_usage():
    proc = subprocess.run([sys.executable, "-m", "infodens.cli", "gaussian", "--bogus"],
                          capture_output=True, text=True)
    assert proc.returncode == 1
    assert "usage:" in proc.stderr


def test_unknown_subcommand(capsys):
    assert run(["nonsense"]) == 1


@pytest.fixture(scope="module")
def cluster_scan(tmp_path_factory):
    path = tmp_path_factory.mktemp("scan") / "scan.csv"
    assert run(["scan", "--system", "cluster", "--n", "2,8,20", "--out", str(path)]) == 0
    return path


def test_scan_csv_format(cluster_scan):
    text = cluster_scan.read_text()
    lines = text.splitlines()
    assert lines[0].startswith("# infodens")
    assert any(ln.startswith("# system.kind = cluster") for ln in lines)
    body = _body(cluster_scan)
    assert body[0] == "system,N,E_r,E_k,S_E,I_r,I_k,S_I,S_r,S_k,S,R_U_r,R_U_k"
    assert len(body) == 4
    assert "\r" not in text
    for row in body[1:]:
        cells = row.split(",")
        assert len(cells) == len(SCAN_COLUMNS)
        assert all(c == f"{float(c):.9g}" for c in cells[1:])


def test_scan_deterministic(cluster_scan, tmp_path):
    again = tmp_path / "again.csv"
    assert run(["scan", "--system", "cluster", "--n", "2,8,20", "--out", str(again)]) == 0
    assert again.read_bytes() == cluster_scan.read_bytes()


def test_fit_reads_scan_csv(cluster_scan, tmp_path, capsys):
    out = tmp_path / "fit.csv"
    assert run(["fit", "--in", str(cluster_scan), "--column", "S_E", "--out", str(out)]) == 0
    body = _body(out)
    assert body[0].split(",")[:2] == ["model", "column"]
    assert "ratio_to_reference_slope" in body[0]
    assert run(["fit", "--in", str(cluster_scan), "--column", "S_I", "--model", "power",
                "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["data"]["model"] == "power"
    assert len(payload["data"]["residuals"]) == 3


def test_fit_errors(tmp_path, cluster_scan):
    assert run(["fit", "--in", str(tmp_path / "missing.csv")]) == 1
    assert run(["fit", "--in", str(cluster_scan), "--column", "nope"]) == 1
    _, rows = read_scan_csv(str(cluster_scan))
    assert [r["N"] for r in rows] == ["2", "8", "20"]


def test_measures_json(capsys):
    assert run(["measures", "--system", "harmonic", "--n", "2", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["data"]["S_E"] == pytest.approx(248.0502, rel=1e-3)
    assert payload["metadata"]["config"]["system.kind"] == "harmonic"


def test_spectrum_table(capsys):
    assert run(["spectrum", "--system", "nucleus", "--n", "16"]) == 0
    body = [ln for ln in capsys.readouterr().out.splitlines() if not ln.startswith("#")]
    assert body[0] == "l,n_r,energy,degeneracy"
    assert body[1].startswith("0,0,-25.40674")


def test_density_files(tmp_path):
    prefix = tmp_path / "ho"
    assert run(["density", "--system", "harmonic", "--n", "2", "--out-prefix", str(prefix)]) == 0
    assert _body(tmp_path / "ho_r.csv")[0] == "r,rho"
    assert _body(tmp_path / "ho_k.csv")[0] == "k,n"


def test_figures_export(tmp_path):
    figs = tmp_path / "figs"
    assert run(["scan", "--system", "harmonic", "--n", "2,8,20", "--out", str(tmp_path / "s.csv"),
                "--figures", str(figs)]) == 0
    assert _body(figs / "fig1_harmonic.csv")[0] == "N,S_E"
    assert _body(figs / "fig2_harmonic.csv")[0] == "N,S_I"


def test_config_file_and_env(tmp_path, monkeypatch, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# trap run\nsystem.kind = harmonic\nscan.n = 2\n", encoding="utf-8")
    assert run(["measures", "--config", str(cfg)]) == 0
    assert "harmonic,2," in capsys.readouterr().out
    monkeypatch.setenv("INFODENS_CONFIG", str(cfg))
    assert run(["measures", "--set", "system.hbar_omega=2.0"]) == 0
    out = capsys.readouterr().out
    assert "# system.hbar_omega = 2" in out
    assert "harmonic,2," in out


@pytest.mark.parametrize("argv", [
    ["measures", "--set", "system.color=blue"],
    ["measures", "--set", "grid.n_points=50"],
    ["measures", "--set", "system.V0=-3"],
    ["measures", "--set", "novalue"],
    ["measures", "--system", "cluster", "--n", "100000"],
    ["measures", "--system", "cluster", "--n", "2,8"],
    ["spectrum", "--system", "bosons", "--n", "10"],
])
def test_input_errors_exit_one(argv, capsys):
    assert run(argv) == 1
    assert capsys.readouterr().err.strip()


def test_solver_failure_exit_two(capsys):
    assert run(["measures", "--system", "cluster", "--n", "20", "--set", "grid.k_max=0.3"]) == 2
    assert "density.momentum_density" in capsys.readouterr().err
