"""Command-line surface: estimation, simulation, scans, and reproduction.

Commands
--------
estimate    pointwise regression estimate from a CSV of (W columns, Y)
simulate    Monte Carlo run of a scenario preset or JSON file
gamma-scan  risk of the selected estimate along a grid of gamma values
reproduce   regenerate the published tables and figure data as CSV/JSON

All outputs are deterministic given flags and seed, for any --threads
value. Deconvolution tables are cached in the directory named by the
WAVEREG_CACHE environment variable (or --cache-dir) when present.
Exit codes: 0 clean, 1 runtime/replication failures, 2 parse or
configuration errors. Failures also emit a one-line JSON manifest on
stderr, and errors.json / manifest.json next to the outputs when an
output directory is in play.
"""

import argparse
import csv
import json
import os
import sys
import time
from dataclasses import replace

import numpy as np

from . import simlab
from .deconv import DeconvKernel, NoiseModel, QuadratureError
from .density import DensityConfig, estimate_m
from .errors import ConfigurationError, MonteCarloError, TableRangeError
from .estimator import Dataset, EstimatorConfig
from .wavelet import load_wavelet, tabulate

_PAPER_CELLS = (("uniform", 0.075), ("beta(2,2)", 0.075), ("beta(0.5,2)", 0.075),
                ("uniform", 0.10), ("beta(2,2)", 0.10), ("beta(0.5,2)", 0.10))
_PRESET_NAMES = tuple(
    f"paper-{simlab._DESIGN_SLUGS[d]}-{f'{s:.3f}'.replace('.', '')}"
    for d, s in _PAPER_CELLS)

FIGURE4_COLUMNS = ("scenario", "design", "sigma", "x0", "replication",
                   "p_hat", "p_hat_oracle", "error")


class CliError(Exception):
    """Carries a manifest payload: kind, message, optional row, exit code."""

    def __init__(self, kind, message, row=None, code=2):
        super().__init__(message)
        self.kind = kind
        self.row = row
        self.code = code

    def manifest(self) -> dict:
        out = {"error": {"type": self.kind, "message": str(self)}}
        if self.row is not None:
            out["error"]["row"] = self.row
        return out


def parse_noise(spec: str, d: int = 1) -> NoiseModel:
    """Noise spec strings: dirac | laplace:SIGMA | gamma:SHAPE:SCALE."""
    parts = spec.split(":")
    try:
        if parts[0] == "dirac" and len(parts) == 1:
            return NoiseModel.dirac(d)
        if parts[0] == "laplace" and len(parts) == 2:
            return NoiseModel.laplace(float(parts[1]), d)
        if parts[0] == "gamma" and len(parts) == 3:
            return NoiseModel.gamma(float(parts[1]), float(parts[2]), d)
    except (ValueError, ConfigurationError) as exc:
        raise CliError("config", f"bad noise spec {spec!r}: {exc}") from exc
    raise CliError("config", f"bad noise spec {spec!r}; expected dirac, "
                             "laplace:SIGMA, or gamma:SHAPE:SCALE")


def parse_wavelet(spec: str):
    """Wavelet spec strings: FAMILY:ORDER, e.g. coiflet:5, daubechies:4."""
    parts = spec.split(":")
    if len(parts) != 2:
        raise CliError("config", f"bad wavelet spec {spec!r}; "
                                 "expected FAMILY:ORDER")
    try:
        return load_wavelet(parts[0], int(parts[1]))
    except (ValueError, ConfigurationError) as exc:
        raise CliError("config", f"bad wavelet spec {spec!r}: {exc}") from exc


def read_dataset_csv(path: str) -> Dataset:
    """CSV with a header row and d+1 numeric columns (W_1..W_d, Y)."""
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise CliError("parse", f"cannot open {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        rows = []
        width = None
        for lineno, row in enumerate(reader, start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if lineno == 1:
                width = len(row)
                if width < 2:
                    raise CliError("parse", "need at least two columns "
                                            "(W_1..W_d, Y)", row=1)
                continue
            if len(row) != width:
                raise CliError("parse", f"expected {width} columns, "
                                        f"got {len(row)}", row=lineno)
            try:
                rows.append([float(c) for c in row])
            except ValueError as exc:
                raise CliError("parse", f"non-numeric cell: {exc}",
                               row=lineno) from exc
    if not rows:
        raise CliError("parse", "no data rows after the header")
    data = np.asarray(rows)
    return Dataset(W=data[:, :-1], Y=data[:, -1])


def resolve_scenario(spec: str, reps=None, seed=None) -> simlab.Scenario:
    """Scenario presets paper-{design}-{sigma} or a JSON file path."""
    if spec in _PRESET_NAMES:
        design, sigma = _PAPER_CELLS[_PRESET_NAMES.index(spec)]
        sc = simlab.paper_scenario(design, sigma)
    elif os.path.exists(spec):
        with open(spec) as fh:
            try:
                raw = json.load(fh)
            except json.JSONDecodeError as exc:
                raise CliError("parse", f"bad scenario file: {exc}",
                               row=exc.lineno) from exc
        sc = _scenario_from_dict(raw)
    else:
        raise CliError("config", f"unknown scenario {spec!r}; expected one "
                                 f"of {', '.join(_PRESET_NAMES)} or a file")
    if reps is not None:
        sc = replace(sc, replications=reps)
    if seed is not None:
        sc = replace(sc, base_seed=seed)
    return sc


def _scenario_from_dict(raw: dict) -> simlab.Scenario:
    if not isinstance(raw, dict):
        raise CliError("parse", "scenario file must hold a JSON object")
    noise_raw = raw.get("noise", {})
    kind = noise_raw.get("kind")
    try:
        if kind == "laplace":
            noise = NoiseModel.laplace(float(noise_raw["sigma"]))
        elif kind == "dirac":
            noise = NoiseModel.dirac()
        else:
            raise CliError("config", f"scenario noise kind must be laplace "
                                     f"or dirac, got {kind!r}")
        fields = {}
        for key in ("design", "n", "s", "eval_points", "replications",
                    "base_seed", "name"):
            if key in raw:
                fields[key] = raw[key]
        if "eval_points" in fields:
            fields["eval_points"] = tuple(fields["eval_points"])
        return simlab.Scenario(noise=noise, **fields)
    except (KeyError, TypeError, ValueError, ConfigurationError) as exc:
        raise CliError("config", f"bad scenario file: {exc}") from exc


def parse_grid(spec: str) -> list:
    """Gamma grids: comma list '0.1,0.5,1' or linspace 'start:stop:count'."""
    try:
        if ":" in spec:
            a, b, k = spec.split(":")
            return [float(v) for v in np.linspace(float(a), float(b), int(k))]
        return [float(v) for v in spec.split(",")]
    except ValueError as exc:
        raise CliError("config", f"bad grid {spec!r}: {exc}") from exc


def _est_config(args) -> EstimatorConfig:
    try:
        return EstimatorConfig(
            gamma=args.gamma, gamma_tilde=getattr(args, "gamma_tilde", None),
            eps=getattr(args, "eps", 0.1), s=getattr(args, "s", 0.0),
            m_sup=getattr(args, "m_sup", 0.0),
            variant=getattr(args, "variant", "practical"),
            j_override=getattr(args, "j_max", None))
    except ConfigurationError as exc:
        raise CliError("config", str(exc)) from exc


def _json_default(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, tuple):
        return list(value)
    raise TypeError(f"not JSON serializable: {type(value)}")


def _write_json(payload: dict, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")


def cmd_estimate(args) -> int:
    dataset = read_dataset_csv(args.data)
    x = [float(v) for v in args.x.split(",")]
    if len(x) != dataset.d:
        raise CliError("config", f"--x has {len(x)} coordinates but the "
                                 f"data has {dataset.d} covariate columns")
    noise = parse_noise(args.noise, dataset.d)
    basis = parse_wavelet(args.wavelet)
    est_config = _est_config(args)
    try:
        kernel = DeconvKernel(tabulate(basis), noise,
                              cache_dir=args.cache_dir)
        report = estimate_m(dataset, x, est_config, DensityConfig(), kernel)
    except ConfigurationError as exc:
        raise CliError("config", str(exc)) from exc
    except (TableRangeError, QuadratureError) as exc:
        raise CliError("runtime", str(exc), code=1) from exc
    payload = {
        "x": x, "n": dataset.n, "d": dataset.d,
        "noise": args.noise, "wavelet": args.wavelet,
        "gamma": est_config.gamma, "variant": est_config.variant,
        "m_hat": report.m_hat, "p_hat": report.p_hat,
        "f_hat": report.f_hat, "denominator": report.denominator,
        "h_star": report.h_star, "j_hat": list(report.j_hat),
        "theory_warning": report.warning,
        "indices": {
            ";".join(str(v) for v in key): {
                "p_hat": rec.p_hat, "sigma_hat_sq": rec.sigma_hat_sq,
                "gamma_term": rec.gamma, "gamma_star": rec.gamma_star,
                "r_hat": rec.r_hat, "sup_tj": rec.sup_tj,
            } for key, rec in report.diagnostics.records.items()},
    }
    if args.out:
        _write_json(payload, args.out)
    else:
        json.dump(payload, sys.stdout, indent=2, sort_keys=True,
                  default=_json_default)
        sys.stdout.write("\n")
    return 0


def cmd_simulate(args) -> int:
    scenario = resolve_scenario(args.scenario, args.reps, args.seed)
    est_config = _est_config(args)
    os.makedirs(args.out_dir, exist_ok=True)
    try:
        table = simlab.run_monte_carlo(scenario, est_config,
                                       threads=args.threads,
                                       cache_dir=args.cache_dir)
    except MonteCarloError as exc:
        raise CliError("montecarlo", str(exc), code=1) from exc
    simlab.write_results_csv(table, os.path.join(args.out_dir, "results.csv"))
    summary = simlab.results_summary(table)
    simlab.write_summary_json(summary, os.path.join(args.out_dir,
                                                    "summary.json"))
    if table.failures:
        manifest = {"error": {"type": "replication",
                              "message": f"{table.failures} failed rows"},
                    "rows": [r.values()[0] for r in table.rows if r.error]}
        _write_json(manifest, os.path.join(args.out_dir, "errors.json"))
        sys.stderr.write(json.dumps(manifest["error"]) + "\n")
        return 1
    return 0


def cmd_gamma_scan(args) -> int:
    scenario = resolve_scenario(args.scenario, args.reps, args.seed)
    grid = parse_grid(args.grid)
    est_config = _est_config(args)
    os.makedirs(args.out_dir, exist_ok=True)
    try:
        result = simlab.gamma_scan(scenario, grid, args.x, est_config,
                                   threads=args.threads,
                                   cache_dir=args.cache_dir)
    except ConfigurationError as exc:
        raise CliError("config", str(exc)) from exc
    simlab.write_gamma_csv(result, os.path.join(args.out_dir,
                                                "gamma-rows.csv"))
    simlab.write_gamma_curve_csv(result, os.path.join(args.out_dir,
                                                      "gamma-curve.csv"))
    jump = simlab.jump_statistic(result.curve)
    risks = dict(result.curve)
    _write_json({
        "scenario": scenario.scenario_id, "x0": result.x0,
        "grid": [g for g, _ in result.curve],
        "jump_statistic": jump, "jump_detected": bool(jump >= 1.5),
        "risk_min": min(r for _, r in result.curve),
        "risk_at_half": risks.get(0.5),
        "runtime_seconds": result.runtime,
    }, os.path.join(args.out_dir, "gamma-summary.json"))
    return 0


def _write_plain_csv(path, columns, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([simlab._fmt_cell(v) for v in row])


def cmd_reproduce(args) -> int:
    tables = set(args.tables.split(",")) if args.tables else set()
    figures = set(args.figures.split(",")) if args.figures else set()
    bad = (tables - {"1", "3"}) | (figures - {"1", "2", "3", "4", "5"})
    if bad:
        raise CliError("config", f"unknown table/figure ids: {sorted(bad)}")
    est_config = _est_config(args)
    os.makedirs(args.out_dir, exist_ok=True)
    summary = {"replications": args.reps, "seed": args.seed, "cells": {}}
    failed = []

    if "1" in tables:
        rows = []
        for design, sigma in _PAPER_CELLS:
            r = simlab.reliability_ratio(design, sigma)
            rows.append((design, sigma, r, simlab.reliability_display(r)))
        _write_plain_csv(os.path.join(args.out_dir, "table-1.csv"),
                         ("design", "sigma", "reliability_ratio", "display"),
                         rows)

    if "1" in figures:
        xs = np.linspace(0.0, 1.0, 2001)
        _write_plain_csv(os.path.join(args.out_dir, "figure-1.csv"),
                         ("x", "m"), zip(xs, simlab.doppler(xs)))

    if "2" in figures:
        for design, _ in _PAPER_CELLS[:3]:
            sc = simlab.paper_scenario(design, 0.075,
                                       base_seed=args.seed or 12345)
            ds = simlab.generate_dataset(sc, 0)
            slug = simlab._DESIGN_SLUGS[design]
            _write_plain_csv(
                os.path.join(args.out_dir, f"figure-2-{slug}.csv"),
                ("w", "y"), zip(ds.W[:, 0], ds.Y))

    need_mc = "3" in tables or "4" in figures or "5" in figures
    if need_mc:
        table3 = []
        fig_rows = {0.25: [], 0.90: []}
        for design, sigma in _PAPER_CELLS:
            sc = simlab.paper_scenario(design, sigma, replications=args.reps)
            if args.seed is not None:
                sc = replace(sc, base_seed=args.seed)
            try:
                t0 = time.perf_counter()
                table = simlab.run_monte_carlo(sc, est_config,
                                               threads=args.threads,
                                               cache_dir=args.cache_dir)
                cell = {"failures": table.failures,
                        "runtime_seconds": time.perf_counter() - t0,
                        "mae": {}}
                for x0 in sc.eval_points:
                    try:
                        cell["mae"][f"{x0:g}"] = simlab.mae(table, x0)
                    except MonteCarloError:
                        cell["mae"][f"{x0:g}"] = None
                    table3.append((sc.scenario_id, design, sigma, x0,
                                   cell["mae"][f"{x0:g}"], table.failures,
                                   sc.replications))
                for row in table.rows:
                    bucket = fig_rows.get(round(row.x0, 2))
                    if bucket is not None:
                        bucket.append((sc.scenario_id, design, sigma, row.x0,
                                       row.replication, row.p_hat,
                                       row.p_hat_oracle, row.error))
                summary["cells"][sc.scenario_id] = cell
            except MonteCarloError as exc:
                failed.append({"cell": sc.scenario_id, "message": str(exc)})
        if "3" in tables:
            _write_plain_csv(os.path.join(args.out_dir, "table-3.csv"),
                             ("scenario", "design", "sigma", "x0", "mae",
                              "failures", "replications"), table3)
        if "4" in figures:
            _write_plain_csv(os.path.join(args.out_dir, "figure-4.csv"),
                             FIGURE4_COLUMNS, fig_rows[0.25])
        if "5" in figures:
            _write_plain_csv(os.path.join(args.out_dir, "figure-5.csv"),
                             FIGURE4_COLUMNS, fig_rows[0.90])

    if "3" in figures:
        sc = simlab.paper_scenario("beta(2,2)", 0.075, replications=args.reps)
        if args.seed is not None:
            sc = replace(sc, base_seed=args.seed)
        grid = parse_grid(args.grid)
        result = simlab.gamma_scan(sc, grid, 0.25, est_config,
                                   threads=args.threads,
                                   cache_dir=args.cache_dir)
        _write_plain_csv(os.path.join(args.out_dir, "figure-3.csv"),
                         ("gamma", "risk"), result.curve)
        simlab.write_gamma_csv(result, os.path.join(args.out_dir,
                                                    "figure-3-rows.csv"))
        jump = simlab.jump_statistic(result.curve)
        summary["gamma_scan"] = {"jump_statistic": jump,
                                 "jump_detected": bool(jump >= 1.5)}

    summary["reliability"] = {
        f"{design}|{sigma:g}": simlab.reliability_display(
            simlab.reliability_ratio(design, sigma))
        for design, sigma in _PAPER_CELLS}
    if failed:
        summary["failed_cells"] = failed
    _write_json(summary, os.path.join(args.out_dir, "reproduce-summary.json"))
    if failed:
        manifest = {"error": {"type": "montecarlo",
                              "message": "some cells failed"},
                    "failed_cells": failed}
        _write_json(manifest, os.path.join(args.out_dir, "manifest.json"))
        sys.stderr.write(json.dumps(manifest["error"]) + "\n")
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavereg",
        description="Adaptive wavelet regression with noisy covariates.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--threads", type=int, default=1,
                       help="worker cap; output is identical for any value")
        p.add_argument("--cache-dir", default=None,
                       help="deconvolution table cache (default: "
                            "WAVEREG_CACHE environment variable)")
        p.add_argument("--gamma", type=float, default=0.5)
        p.add_argument("--variant", choices=("practical", "theoretical"),
                       default="practical")

    p = sub.add_parser("estimate", help="pointwise estimate from a data CSV")
    p.add_argument("--data", required=True, help="CSV of W_1..W_d, Y")
    p.add_argument("--x", required=True,
                   help="evaluation point, comma-separated coordinates")
    p.add_argument("--noise", required=True,
                   help="dirac | laplace:SIGMA | gamma:SHAPE:SCALE")
    p.add_argument("--wavelet", default="coiflet:5", help="FAMILY:ORDER")
    p.add_argument("--out", default=None, help="JSON report path (stdout "
                                               "when omitted)")
    p.add_argument("--gamma-tilde", type=float, default=None)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--m-sup", type=float, default=0.0)
    p.add_argument("--s", type=float, default=0.0)
    p.add_argument("--j-max", type=int, default=None)
    common(p)
    p.set_defaults(fn=cmd_estimate)

    p = sub.add_parser("simulate", help="Monte Carlo run of one scenario")
    p.add_argument("--scenario", required=True,
                   help=f"preset ({', '.join(_PRESET_NAMES)}) or JSON file")
    p.add_argument("--reps", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out-dir", required=True)
    common(p)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("gamma-scan", help="risk along a gamma grid")
    p.add_argument("--scenario", required=True)
    p.add_argument("--grid", default="0.05:2.0:40",
                   help="comma list or START:STOP:COUNT")
    p.add_argument("--x", type=float, default=0.25)
    p.add_argument("--reps", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out-dir", required=True)
    common(p)
    p.set_defaults(fn=cmd_gamma_scan)

    p = sub.add_parser("reproduce", help="regenerate tables and figure data")
    p.add_argument("--tables", default="1,3")
    p.add_argument("--figures", default="1,2,3,4,5")
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--grid", default="0.05:2.0:40")
    p.add_argument("--out-dir", required=True)
    common(p)
    p.set_defaults(fn=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CliError as exc:
        sys.stderr.write(json.dumps(exc.manifest()) + "\n")
        out_dir = getattr(args, "out_dir", None)
        if out_dir and os.path.isdir(out_dir):
            _write_json(exc.manifest(), os.path.join(out_dir, "errors.json"))
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
