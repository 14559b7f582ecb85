from __future__ import annotations

import csv
import json
import os

import numpy as np
import pytest

from wavereg import active_indices, eval_phi_jk, load_wavelet, tabulate
from wavereg.cli import main
from wavereg.simlab import RESULT_COLUMNS, doppler


@pytest.fixture(scope="module", autouse=True)
def shared_cache(tmp_path_factory):
    # one deconvolution-table cache for every CLI invocation in this module
    cache = tmp_path_factory.mktemp("djcache")
    old = os.environ.get("WAVEREG_CACHE")
    os.environ["WAVEREG_CACHE"] = str(cache)
    yield
    if old is None:
        os.environ.pop("WAVEREG_CACHE", None)
    else:
        os.environ["WAVEREG_CACHE"] = old


def write_sample_csv(path, n=60, seed=0, header=("w", "y")):
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.0, 1.0, n)
    y = np.sin(2 * np.pi * x) + 0.1 * rng.standard_normal(n)
    w = x + rng.laplace(0.0, 0.075, n)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for wi, yi in zip(w, y):
            writer.writerow([f"{wi:.17g}", f"{yi:.17g}"])
    return w, y


def test_estimate_writes_report(tmp_path):
    data = tmp_path / "data.csv"
    write_sample_csv(data)
    out = tmp_path / "report.json"
    code = main(["estimate", "--data", str(data), "--x", "0.5",
                 "--noise", "laplace:0.075", "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["n"] == 60
    assert report["d"] == 1
    assert report["denominator"] == max(report["f_hat"], 60 ** -0.5)
    assert report["m_hat"] == pytest.approx(report["p_hat"] / report["denominator"])
    key = ";".join(str(v) for v in report["j_hat"])
    assert key in report["indices"]
    rec = report["indices"][key]
    assert set(rec) == {"p_hat", "sigma_hat_sq", "gamma_term", "gamma_star",
                        "r_hat", "sup_tj"}
    assert report["theory_warning"] is True  # default gamma ignores the theory


def test_estimate_prints_to_stdout(tmp_path, capsys):
    data = tmp_path / "data.csv"
    write_sample_csv(data)
    code = main(["estimate", "--data", str(data), "--x", "0.5",
                 "--noise", "dirac"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["noise"] == "dirac"


def test_estimate_dirac_matches_direct_projection(tmp_path):
    data = tmp_path / "data.csv"
    w, y = write_sample_csv(data, seed=5)
    out = tmp_path / "report.json"
    code = main(["estimate", "--data", str(data), "--x", "0.4",
                 "--noise", "dirac", "--j-max", "0", "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["j_hat"] == [0]
    basis = load_wavelet("coiflet", 5)
    table = tabulate(basis)
    total = 0.0
    for wu, yu in zip(w, y):
        for k in active_indices(basis, (0,), (0.4,)):
            total += yu * eval_phi_jk(table, (0,), k, (0.4,)) * eval_phi_jk(
                table, (0,), k, (wu,))
    assert report["p_hat"] == pytest.approx(total / len(y), abs=1e-8)


def test_estimate_rejects_non_numeric_cell(tmp_path, capsys):
    data = tmp_path / "bad.csv"
    with open(data, "w", newline="") as fh:
        fh.write("w,y\n0.5,1.0\n0.6,abc\n")
    code = main(["estimate", "--data", str(data), "--x", "0.5",
                 "--noise", "dirac"])
    assert code == 2
    manifest = json.loads(capsys.readouterr().err)
    assert manifest["error"]["type"] == "parse"
    assert manifest["error"]["row"] == 3  # 1-based file line of the bad cell


@pytest.mark.parametrize(
    "argv",
    [
        ["--x", "0.5,0.5", "--noise", "dirac"],  # x/data dimension clash
        ["--x", "0.5", "--noise", "laplace"],  # missing sigma
        ["--x", "0.5", "--noise", "dirac", "--wavelet", "coiflet5"],
        ["--x", "0.5", "--noise", "laplace:0.075", "--wavelet", "daubechies:4"],
        ["--x", "0.5", "--noise", "dirac", "--gamma", "0"],
    ],
)
def test_estimate_config_errors_exit_2(tmp_path, capsys, argv):
    data = tmp_path / "data.csv"
    write_sample_csv(data, n=30)
    code = main(["estimate", "--data", str(data)] + argv)
    assert code == 2
    manifest = json.loads(capsys.readouterr().err)
    assert manifest["error"]["type"] in ("config", "parse")


def test_estimate_missing_file(tmp_path, capsys):
    code = main(["estimate", "--data", str(tmp_path / "nope.csv"),
                 "--x", "0.5", "--noise", "dirac"])
    assert code == 2
    assert json.loads(capsys.readouterr().err)["error"]["type"] == "parse"


def scenario_file(tmp_path, **overrides) -> str:
    spec = {
        "design": "uniform",
        "noise": {"kind": "dirac"},
        "n": 128,
        "replications": 3,
        "eval_points": [0.25, 0.9],
        "name": "cli-smoke",
    }
    spec.update(overrides)
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(spec))
    return str(path)


def test_simulate_writes_stable_layout(tmp_path):
    out = tmp_path / "run"
    code = main(["simulate", "--scenario", scenario_file(tmp_path),
                 "--out-dir", str(out)])
    assert code == 0
    assert sorted(p.name for p in out.iterdir()) == ["results.csv", "summary.json"]
    with open(out / "results.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == RESULT_COLUMNS
    assert len(rows) == 1 + 3 * 2  # reps x eval points
    summary = json.loads((out / "summary.json").read_text())
    assert summary["scenario"] == "cli-smoke"
    assert set(summary["mae"]) == {"0.25", "0.9"}
    assert summary["failures"] == 0


def test_simulate_preset_five_reps(tmp_path):
    out = tmp_path / "preset"
    code = main(["simulate", "--scenario", "paper-u-0075", "--reps", "5",
                 "--out-dir", str(out), "--threads", "2"])
    assert code == 0
    with open(out / "results.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 11
    summary = json.loads((out / "summary.json").read_text())
    assert summary["replications"] == 5
    assert summary["reliability_display"] == "0.88"
    assert summary["n"] == 1024


def test_simulate_same_seed_identical_bytes(tmp_path):
    sc = scenario_file(tmp_path)
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["simulate", "--scenario", sc, "--seed", "7",
                 "--out-dir", str(a)]) == 0
    assert main(["simulate", "--scenario", sc, "--seed", "7",
                 "--out-dir", str(b)]) == 0
    assert (a / "results.csv").read_bytes() == (b / "results.csv").read_bytes()


def test_simulate_thread_count_does_not_change_results(tmp_path):
    sc = scenario_file(tmp_path)
    a, b = tmp_path / "t1", tmp_path / "t4"
    assert main(["simulate", "--scenario", sc, "--out-dir", str(a),
                 "--threads", "1"]) == 0
    assert main(["simulate", "--scenario", sc, "--out-dir", str(b),
                 "--threads", "4"]) == 0
    assert (a / "results.csv").read_bytes() == (b / "results.csv").read_bytes()


def test_simulate_unknown_scenario(tmp_path, capsys):
    code = main(["simulate", "--scenario", "paper-nope", "--out-dir",
                 str(tmp_path / "x")])
    assert code == 2
    assert json.loads(capsys.readouterr().err)["error"]["type"] == "config"


def test_gamma_scan_layout_and_sorted_grid(tmp_path):
    out = tmp_path / "scan"
    code = main(["gamma-scan", "--scenario", scenario_file(tmp_path),
                 "--grid", "0.25,0.5,1.0", "--x", "0.25", "--reps", "2",
                 "--out-dir", str(out)])
    assert code == 0
    assert sorted(p.name for p in out.iterdir()) == [
        "gamma-curve.csv", "gamma-rows.csv", "gamma-summary.json"]
    with open(out / "gamma-curve.csv", newline="") as fh:
        curve = list(csv.reader(fh))
    gammas = [float(r[0]) for r in curve[1:]]
    assert gammas == sorted(gammas) == [0.25, 0.5, 1.0]
    with open(out / "gamma-rows.csv", newline="") as fh:
        assert len(list(csv.reader(fh))) == 1 + 2 * 3
    summary = json.loads((out / "gamma-summary.json").read_text())
    assert summary["risk_at_half"] is not None
    assert summary["risk_min"] <= summary["risk_at_half"]
    assert isinstance(summary["jump_detected"], bool)


def test_gamma_scan_single_point_grid(tmp_path):
    out = tmp_path / "single"
    code = main(["gamma-scan", "--scenario", scenario_file(tmp_path),
                 "--grid", "0.5", "--reps", "2", "--out-dir", str(out)])
    assert code == 0
    summary = json.loads((out / "gamma-summary.json").read_text())
    assert summary["grid"] == [0.5]
    assert summary["risk_min"] == summary["risk_at_half"]
    assert summary["jump_detected"] is False


def test_gamma_scan_rejects_unsorted_grid(tmp_path, capsys):
    code = main(["gamma-scan", "--scenario", scenario_file(tmp_path),
                 "--grid", "0.5,0.25", "--reps", "1",
                 "--out-dir", str(tmp_path / "bad")])
    assert code == 2
    assert json.loads(capsys.readouterr().err)["error"]["type"] == "config"


def test_reproduce_table_1(tmp_path):
    out = tmp_path / "t1"
    code = main(["reproduce", "--tables", "1", "--figures", "",
                 "--out-dir", str(out)])
    assert code == 0
    with open(out / "table-1.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["design", "sigma", "reliability_ratio", "display"]
    displays = {(r[0], float(r[1])): r[3] for r in rows[1:]}
    assert displays == {
        ("uniform", 0.075): "0.88",
        ("beta(2,2)", 0.075): "0.81",
        ("beta(0.5,2)", 0.075): "0.80",
        ("uniform", 0.1): "0.80",
        ("beta(2,2)", 0.1): "0.71",
        ("beta(0.5,2)", 0.1): "0.69",
    }


def test_reproduce_function_and_sample_figures(tmp_path):
    out = tmp_path / "figs"
    code = main(["reproduce", "--tables", "", "--figures", "1,2",
                 "--out-dir", str(out)])
    assert code == 0
    with open(out / "figure-1.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 2002
    xs = np.array([float(r[0]) for r in rows[1:]])
    ms = np.array([float(r[1]) for r in rows[1:]])
    np.testing.assert_allclose(ms, doppler(xs), atol=1e-12)
    for slug in ("u", "beta22", "beta0522"):
        with open(out / f"figure-2-{slug}.csv", newline="") as fh:
            assert len(list(csv.reader(fh))) == 1025


def test_reproduce_smoke_table_3(tmp_path):
    out = tmp_path / "t3"
    code = main(["reproduce", "--tables", "3", "--figures", "4,5",
                 "--reps", "2", "--threads", "4", "--out-dir", str(out)])
    assert code == 0
    with open(out / "table-3.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 13  # six cells x two points
    for fig, x0 in (("figure-4.csv", 0.25), ("figure-5.csv", 0.9)):
        with open(out / fig, newline="") as fh:
            frows = list(csv.reader(fh))
        assert len(frows) == 13  # six cells x two replications
        assert all(float(r[3]) == x0 for r in frows[1:])
    summary = json.loads((out / "reproduce-summary.json").read_text())
    assert len(summary["cells"]) == 6
    for cell in summary["cells"].values():
        assert set(cell["mae"]) == {"0.25", "0.9"}


def test_reproduce_unknown_ids(tmp_path, capsys):
    code = main(["reproduce", "--tables", "2", "--out-dir",
                 str(tmp_path / "x")])
    assert code == 2
    assert json.loads(capsys.readouterr().err)["error"]["type"] == "config"
