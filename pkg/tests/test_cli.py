"""End-to-end CLI tests: subcommands, file contracts, exit codes, determinism."""

import json
import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest


def run_cli(*args: str) -> subprocess.CompletedProcess:
    cmd = [sys.executable, "-m", "continuum_overlap.cli", *args]
    return subprocess.run(cmd, capture_output=True, text=True)


def read_csv(path: Path):
    return np.genfromtxt(path, delimiter=",", names=True, dtype=None, encoding="utf-8")


def test_help():
    cp = run_cli("--help")
    assert cp.returncode == 0
    for sub in ("coeffs", "overlap", "figure", "packet", "verify", "regcmp"):
        assert sub in cp.stdout


def test_coeffs_delta_unitarity(tmp_path: Path):
    out = tmp_path / "co"
    cp = run_cli("coeffs", "--potential", "delta", "--g", "3", "--k", "1:10:100",
                 "--out", str(out))
    assert cp.returncode == 0, cp.stderr
    dat = read_csv(out.with_suffix(".csv"))
    assert dat.shape[0] == 100
    assert np.max(dat["unitarity_defect"]) < 1e-12


def test_coeffs_free_reflectionless(tmp_path: Path):
    out = tmp_path / "co"
    cp = run_cli("coeffs", "--potential", "free", "--k", "0.5:5:20", "--out", str(out))
    assert cp.returncode == 0, cp.stderr
    dat = read_csv(out.with_suffix(".csv"))
    assert np.all(dat["re_R"] == 0) and np.all(dat["im_R"] == 0)


def test_coeffs_square_well_resonances(tmp_path: Path):
    # grid pinned to khat a = n pi: reflection dies there
    ks = [math.sqrt((n * math.pi / 10.0) ** 2 + 4.0) for n in (1, 2, 3)]
    out = tmp_path / "co"
    for i, k in enumerate(ks):
        cp = run_cli("coeffs", "--potential", "square_well", "--V0", "2", "--a", "10",
                     "--k", f"{k}:{k}:1", "--out", str(out) + str(i))
        assert cp.returncode == 0, cp.stderr
        dat = read_csv(Path(str(out) + str(i) + ".csv"))
        assert math.hypot(float(dat["re_R"]), float(dat["im_R"])) < 1e-10


def test_determinism_byte_identical(tmp_path: Path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        cp = run_cli("coeffs", "--potential", "square_well", "--V0", "2", "--a", "10",
                     "--k", "0.3:7:64", "--out", str(out))
        assert cp.returncode == 0
    assert a.with_suffix(".csv").read_bytes() == b.with_suffix(".csv").read_bytes()


def test_config_file_and_flag_precedence(tmp_path: Path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"potential": {"kind": "delta", "g": 1.0}}))
    out = tmp_path / "co"
    cp = run_cli("--config", str(cfg), "coeffs", "--g", "3", "--k", "3:3:1",
                 "--out", str(out))
    assert cp.returncode == 0, cp.stderr
    dat = read_csv(out.with_suffix(".csv"))
    # flag g=3 wins over config g=1: at k=g, |R|^2 = 1/2
    r2 = float(dat["re_R"]) ** 2 + float(dat["im_R"]) ** 2
    assert r2 == pytest.approx(0.5, abs=1e-12)


def test_unknown_config_key_exits_2(tmp_path: Path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"potential": {"kind": "free"}, "bogus": 1}))
    cp = run_cli("--config", str(cfg), "coeffs", "--k", "1:2:2")
    assert cp.returncode == 2


def test_bad_range_exits_2():
    cp = run_cli("coeffs", "--potential", "free", "--k", "1-10")
    assert cp.returncode == 2


def test_nonconvergence_exits_3(tmp_path: Path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"quadrature": {"abs_tol": 1e-14, "rel_tol": 1e-14,
                                              "max_subdivisions": 4}}))
    cp = run_cli("--config", str(cfg), "overlap", "--potential", "square_well",
                 "--V0", "2", "--a", "10", "--k1", "2.6", "--k2", "2.1",
                 "--x1", "-200", "--x2", "200", "--out", str(tmp_path / "ov"))
    assert cp.returncode == 3
    assert not (tmp_path / "ov.csv").exists()   # no partial output


def test_overlap_single_row(tmp_path: Path):
    out = tmp_path / "ov"
    cp = run_cli("overlap", "--potential", "square_well", "--V0", "2", "--a", "10",
                 "--k1", "2.6", "--k2", "2.1", "--out", str(out))
    assert cp.returncode == 0, cp.stderr
    dat = read_csv(out.with_suffix(".csv"))
    assert float(dat["identity_residual"]) < 1e-9
    assert float(dat["diag_weight"]) == pytest.approx(2 * math.pi)


def test_overlap_grid_csv_contract(tmp_path: Path):
    out = tmp_path / "grid"
    cp = run_cli("overlap", "--potential", "square_well", "--V0", "2", "--a", "10",
                 "--grid1", "0.1:0.6:12", "--grid2", "0.1:0.6:11", "--out", str(out))
    assert cp.returncode == 0, cp.stderr
    header = out.with_suffix(".csv").read_text().splitlines()[0]
    assert header == "k1,k2,re_delta,im_delta,abs2_delta"
    dat = read_csv(out.with_suffix(".csv"))
    assert dat.shape[0] == 12 * 11
    sidecar = json.loads(out.with_suffix(".json").read_text())
    assert sidecar["axis"] == "khat"
    assert sidecar["potential"]["kind"] == "square_well"
    assert "quadrature" in sidecar


def test_figure1_summary_and_render(tmp_path: Path):
    out = tmp_path / "fig1"
    cp = run_cli("figure", "1", "--out", str(out))
    assert cp.returncode == 0, cp.stderr
    summary = json.loads(out.with_suffix(".json").read_text())
    assert len(summary["attempts"]) == 2
    best = min(summary["attempts"], key=lambda a: a["best_match_error"])
    assert best["best_match_error"] < 0.05
    assert summary["closest_reading"] == "khat2_absolute"
    png = out.with_suffix(".png")
    assert png.exists() and png.stat().st_size > 1000
    header = out.with_suffix(".csv").read_text().splitlines()[0]
    assert header == "k1,k2,re_delta,im_delta,abs2_delta"


def test_figure2_peak_location(tmp_path: Path):
    out = tmp_path / "fig2"
    cp = run_cli("figure", "2", "--n", "101", "--out", str(out), "--no-render")
    assert cp.returncode == 0, cp.stderr
    summary = json.loads(out.with_suffix(".json").read_text())
    assert summary["peak"]["a_khat1"] == pytest.approx(math.pi, abs=0.2)
    assert summary["peak"]["a_khat2"] == pytest.approx(math.pi, abs=0.2)


def test_packet_free_trace(tmp_path: Path):
    out = tmp_path / "pk"
    cp = run_cli("packet", "--potential", "free", "--P0", "1", "--X0", "-50",
                 "--sigma", "0.01", "--t", "0:100:6", "--out", str(out), "--no-render")
    assert cp.returncode == 0, cp.stderr
    dat = read_csv(out.with_suffix(".csv"))
    assert np.max(np.abs(dat["dNdt"])) < 1e-10
    assert np.allclose(dat["N"], 1.0, atol=1e-8)


def test_packet_compare_columns(tmp_path: Path):
    out = tmp_path / "pkc"
    cp = run_cli("packet", "--potential", "square_well", "--V0", "2", "--a", "10",
                 "--P0", "1", "--X0", "-50", "--sigma", "0.01", "--t", "57:62:3",
                 "--method", "compare", "--out", str(out), "--no-render")
    assert cp.returncode == 0, cp.stderr
    header = out.with_suffix(".csv").read_text().splitlines()[0]
    assert header == "t,N,dNdt_direct,dNdt_stationary_phase,rel_difference"
    dat = read_csv(out.with_suffix(".csv"))
    assert np.max(dat["rel_difference"]) < 0.25


def test_packet_renders_figures(tmp_path: Path):
    out = tmp_path / "pk"
    cp = run_cli("packet", "--potential", "square_well", "--V0", "2", "--a", "10",
                 "--P0", "1", "--X0", "-50", "--sigma", "0.01", "--t", "40:60:3",
                 "--out", str(out))
    assert cp.returncode == 0, cp.stderr
    for suffix in ("_norm.png", "_rate.png"):
        p = Path(str(out) + suffix)
        assert p.exists() and p.stat().st_size > 1000


def test_packet_swave(tmp_path: Path):
    out = tmp_path / "pks"
    cp = run_cli("packet", "--potential", "free", "--P0", "1", "--X0", "-50",
                 "--sigma", "0.01", "--t", "0:100:5", "--swave", "hard_sphere",
                 "--r-s", "1", "--out", str(out), "--no-render")
    assert cp.returncode == 0, cp.stderr
    dat = read_csv(out.with_suffix(".csv"))
    assert abs(dat["dNdt"][0]) < 1e-8


def test_verify_identities_exit0(tmp_path: Path):
    out = tmp_path / "rep"
    cp = run_cli("verify", "identities", "--out", str(out))
    assert cp.returncode == 0, cp.stdout + cp.stderr
    report = json.loads(out.with_suffix(".json").read_text())
    assert report["passed"] is True
    assert all(c["pass"] for c in report["checks"])
    assert any("finite_interval" in c["name"] for c in report["checks"])


def test_regcmp_report(tmp_path: Path):
    out = tmp_path / "rc"
    cp = run_cli("regcmp", "--potential", "square_well", "--V0", "2", "--a", "10",
                 "--lams", "25,50", "--epsilons", "0.01,0.005", "--out", str(out),
                 "--no-render")
    assert cp.returncode == 0, cp.stderr
    rep = json.loads(out.with_suffix(".json").read_text())
    assert rep["cutoff_norm2"][1] / rep["cutoff_norm2"][0] == pytest.approx(2.0, rel=0.01)
    assert rep["regularized_norm2"][1] / rep["regularized_norm2"][0] == pytest.approx(2.0, rel=0.01)
    assert rep["cutoff_norm2_constant"] == pytest.approx(4 * math.pi, rel=1e-3)
    assert rep["boundary_residuals"][0] > rep["boundary_residuals"][1] > 0


def test_coeffs_json_format(tmp_path: Path):
    out = tmp_path / "co"
    cp = run_cli("coeffs", "--potential", "delta", "--g", "2", "--k", "1:4:4",
                 "--format", "json", "--out", str(out))
    assert cp.returncode == 0, cp.stderr
    rep = json.loads(out.with_suffix(".json").read_text())
    assert rep["potential"]["kind"] == "delta"
    assert len(rep["rows"]) == 4
    assert rep["rows"][0]["unitarity_defect"] < 1e-12


def test_verify_failure_exits_4(tmp_path: Path, monkeypatch):
    # exit-code contract: any failing check must surface as code 4
    from continuum_overlap import cli as climod

    def broken_suite(qcfg):
        return [{"name": "x", "claim": "y", "value": 1.0, "tolerance": 0.5,
                 "pass": False, "gating": True}]

    monkeypatch.setattr(climod, "_suite_airy", broken_suite)
    rc = climod.main(["--out", str(tmp_path / "rep"), "verify", "airy"])
    assert rc == 4
