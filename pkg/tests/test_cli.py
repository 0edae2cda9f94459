import json

import pytest

from qfigrowth.cli import main


def read(path):
    return path.read_text()


# ---------------------------------------------------------------- ising-qfi


def test_ising_qfi_row_count(tmp_path):
    out = tmp_path / "s.csv"
    code = main(
        ["ising-qfi", "--alpha", "0.5", "--n", "8", "--t-max", "2.0", "--dt", "0.05",
         "--out", str(out)]
    )
    assert code == 0
    lines = read(out).splitlines()
    assert lines[0] == "t,qfi,nx,ny,nz"
    assert len(lines) == 1 + 41  # t = 0 plus 40 steps


def test_ising_qfi_sidecar_echoes_config(tmp_path):
    out = tmp_path / "s.csv"
    main(["ising-qfi", "--alpha", "1.5", "--n", "6", "--t-max", "4.0", "--out", str(out)])
    doc = json.loads(read(tmp_path / "s.csv.json"))
    assert doc["config"]["alpha"] == 1.5
    assert doc["config"]["n"] == 6
    assert doc["config"]["dt"] == 0.05
    assert doc["config"]["tau"] == 2.0
    assert doc["config"]["boundary"] == "open"
    assert doc["results"]["t_p"] >= doc["config"]["tau"]
    assert doc["results"]["ratio"] > 0


def test_ising_qfi_short_grid_reports_last_point(tmp_path):
    # a grid ending before tau falls back to its final sample
    out = tmp_path / "s.csv"
    main(["ising-qfi", "--alpha", "1.5", "--n", "6", "--t-max", "1.0", "--out", str(out)])
    doc = json.loads(read(tmp_path / "s.csv.json"))
    assert doc["results"]["t_p"] == 1.0


def test_ising_qfi_rejects_single_spin(tmp_path):
    code = main(["ising-qfi", "--alpha", "0.0", "--n", "1", "--out", str(tmp_path / "x.csv")])
    assert code == 2


def test_ising_qfi_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["ising-qfi", "--alpha", "0.7", "--n", "7", "--t-max", "1.5", "--dt", "0.1"]
    main(argv + ["--out", str(a)])
    main(argv + ["--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_ising_qfi_early_growth_ordering(tmp_path):
    outs = {}
    for alpha in ("0", "0.5"):
        out = tmp_path / f"g{alpha}.csv"
        main(["ising-qfi", "--alpha", alpha, "--n", "20", "--t-max", "0.5", "--dt", "0.05",
              "--out", str(out)])
        rows = [line.split(",") for line in read(out).splitlines()[1:]]
        outs[alpha] = [float(r[1]) for r in rows]
    for slow, fast in zip(outs["0"][1:], outs["0.5"][1:]):
        assert slow <= fast + 1e-9


def test_config_file_overrides_flags(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"t-max": 1.0, "dt": 0.25}))
    out = tmp_path / "s.csv"
    code = main(
        ["ising-qfi", "--alpha", "0.5", "--n", "6", "--t-max", "9.0", "--dt", "0.05",
         "--out", str(out), "--config", str(cfg)]
    )
    assert code == 0
    assert len(read(out).splitlines()) == 1 + 5  # overridden grid: 4 steps + t=0


def test_config_file_rejects_unknown_keys(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"bogus": 1}))
    code = main(
        ["ising-qfi", "--alpha", "0.5", "--n", "6", "--out", str(tmp_path / "s.csv"),
         "--config", str(cfg)]
    )
    assert code == 2


def test_io_failure_exit_code(tmp_path):
    code = main(
        ["ising-qfi", "--alpha", "0.5", "--n", "6", "--t-max", "1.0",
         "--out", str(tmp_path / "missing" / "s.csv")]
    )
    assert code == 3


# ---------------------------------------------------------------- sweep-fit


def test_sweep_fit_outputs(tmp_path):
    sweep, fit = tmp_path / "sweep.csv", tmp_path / "fit.csv"
    code = main(
        ["sweep-fit", "--alpha", "0.5", "2.0", "--n", "8", "12", "16",
         "--dt", "0.1", "--max-points", "200",
         "--out-sweep", str(sweep), "--out-fit", str(fit)]
    )
    assert code == 0
    sweep_lines = read(sweep).splitlines()
    fit_lines = read(fit).splitlines()
    assert sweep_lines[0] == "alpha,N,t_p,F_Q,ratio"
    assert len(sweep_lines) == 1 + 6
    assert fit_lines[0] == "alpha,delta,delta_f,r2_delta,r2_delta_f"
    assert len(fit_lines) == 1 + 2
    for line in sweep_lines[1:]:
        alpha, n, t_p, fq, ratio = (float(v) for v in line.split(","))
        assert t_p >= 2.0  # reported optima respect the tau floor
        assert ratio * t_p <= fq * (1 + 1e-9)  # pointwise: rate*tau <= max QFI


def test_sweep_fit_requires_three_sizes(tmp_path):
    code = main(
        ["sweep-fit", "--alpha", "0.5", "--n", "8", "12",
         "--out-sweep", str(tmp_path / "a.csv"), "--out-fit", str(tmp_path / "b.csv")]
    )
    assert code == 2


def test_sweep_fit_deterministic_with_threads(tmp_path, monkeypatch):
    argv = ["sweep-fit", "--alpha", "1.5", "--n", "6", "8", "10", "--dt", "0.1",
            "--max-points", "100"]
    one = tmp_path / "one.csv"
    two = tmp_path / "two.csv"
    monkeypatch.delenv("QFIGROWTH_THREADS", raising=False)
    main(argv + ["--out-sweep", str(one), "--out-fit", str(tmp_path / "f1.csv")])
    monkeypatch.setenv("QFIGROWTH_THREADS", "4")
    main(argv + ["--out-sweep", str(two), "--out-fit", str(tmp_path / "f2.csv")])
    assert one.read_bytes() == two.read_bytes()
    assert (tmp_path / "f1.csv").read_bytes() == (tmp_path / "f2.csv").read_bytes()


# --------------------------------------------------------------- bound-curve


def test_bound_curve_range_grid(tmp_path):
    out = tmp_path / "bound.csv"
    code = main(["bound-curve", "--d", "1", "--alpha", "0:5:0.5", "--out", str(out)])
    assert code == 0
    lines = read(out).splitlines()
    assert lines[0] == "alpha,delta_max,regime"
    assert len(lines) == 1 + 11
    by_alpha = {float(l.split(",")[0]): l.split(",") for l in lines[1:]}
    assert float(by_alpha[3.0][1]) == 0.0
    assert by_alpha[3.0][2] == "polynomial"
    assert float(by_alpha[2.5][1]) == 0.5
    assert by_alpha[4.0][2] == "linear"
    assert by_alpha[0.5][2] == "nonlocal"


def test_bound_curve_2d_linear_value(tmp_path):
    out = tmp_path / "bound.csv"
    main(["bound-curve", "--d", "2", "--alpha", "6.0", "--out", str(out)])
    row = read(out).splitlines()[1].split(",")
    assert float(row[1]) == 0.5


# ------------------------------------------------------------------- verify


def test_verify_passes_small(capsys):
    code = main(["verify", "--n-max", "3"])
    assert code == 0
    assert "all verification checks passed" in capsys.readouterr().out


def test_verify_rejects_large_cap():
    assert main(["verify", "--n-max", "12"]) == 2
