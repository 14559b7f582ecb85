"""Simulation scenarios, Monte Carlo harness, and result tables.

Scenarios bundle a regression function, a covariate design, noise levels,
and replication bookkeeping. Each replication draws its own counter-based
random stream, so replications are order-independent and can run on any
number of workers without changing the output. Results are emitted as
plain rows (CSV) plus a JSON summary so downstream consumers never need
to import this package.
"""

import csv
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from numpy.polynomial.legendre import leggauss

import numpy as np
from scipy.special import beta as _beta_fn

from .deconv import DeconvKernel, NoiseModel, QuadratureError
from .density import DensityConfig, f_hat, gl_bandwidth
from .errors import ConfigurationError, MonteCarloError, TableRangeError
from .estimator import (Dataset, EstimatorConfig, enumerate_J, index_stats,
                        p_hat, select_from_stats)
from .wavelet import ScalingTable, active_indices, load_wavelet, tabulate

_DESIGNS = ("uniform", "beta(2,2)", "beta(0.5,2)")
_BETA_PARAMS = {"beta(2,2)": (2.0, 2.0), "beta(0.5,2)": (0.5, 2.0)}
_DESIGN_SLUGS = {"uniform": "u", "beta(2,2)": "beta22", "beta(0.5,2)": "beta0522"}

RESULT_COLUMNS = ("replication", "scenario", "x0", "j_hat", "p_hat",
                  "p_hat_oracle", "j_oracle", "f_hat", "m_hat", "abs_err_m",
                  "abs_err_p", "error")
GAMMA_COLUMNS = ("replication", "gamma", "j_hat", "p_hat", "abs_err_p")


def doppler(x):
    """Oscillation with frequency increasing toward zero, damped to 0 at 0 and 1.

    sqrt(x(1-x)) sin(2 pi 1.05 / (x + 0.05)); sup norm 1/2 from the envelope.
    """
    xv = np.asarray(x, dtype=float)
    out = np.sqrt(xv * (1.0 - xv)) * np.sin(2.0 * np.pi * 1.05 / (xv + 0.05))
    return float(out) if out.ndim == 0 else out


def design_variance(design: str) -> float:
    """Var(X) in closed form: 1/12 uniform, ab/((a+b)^2(a+b+1)) Beta."""
    if design == "uniform":
        return 1.0 / 12.0
    if design in _BETA_PARAMS:
        a, b = _BETA_PARAMS[design]
        return a * b / ((a + b) ** 2 * (a + b + 1.0))
    raise ConfigurationError(f"unknown design {design!r}")


def design_pdf(design: str, x) -> float:
    """Design density at x (0 outside the unit interval)."""
    xv = float(x)
    if not 0.0 < xv < 1.0:
        return 0.0
    if design == "uniform":
        return 1.0
    if design in _BETA_PARAMS:
        a, b = _BETA_PARAMS[design]
        return xv ** (a - 1.0) * (1.0 - xv) ** (b - 1.0) / _beta_fn(a, b)
    raise ConfigurationError(f"unknown design {design!r}")


def reliability_ratio(design: str, sigma_gl: float) -> float:
    """Var(X) / (Var(X) + 2 sigma^2), the noise-to-signal summary.

    Exact value; published tables truncate it to two decimals (0.8064
    appears as 0.80), see `reliability_display`.
    """
    if sigma_gl < 0:
        raise ConfigurationError("noise scale must be nonnegative")
    var = design_variance(design)
    return var / (var + 2.0 * sigma_gl ** 2)


def reliability_display(value: float) -> str:
    """Two-decimal display, truncated toward zero (0.6957 -> '0.69')."""
    return f"{math.floor(value * 100.0 + 1e-12) / 100.0:.2f}"


def sample_design(rng: np.random.Generator, design: str, n: int) -> np.ndarray:
    """Draw n design points; Beta through the two-Gamma ratio."""
    if design == "uniform":
        return rng.random(n)
    if design in _BETA_PARAMS:
        a, b = _BETA_PARAMS[design]
        g1 = rng.standard_gamma(a, n)
        g2 = rng.standard_gamma(b, n)
        return g1 / (g1 + g2)
    raise ConfigurationError(f"unknown design {design!r}")


def sample_laplace(rng: np.random.Generator, sigma: float, n: int) -> np.ndarray:
    """Centered Laplace with scale sigma (variance 2 sigma^2), inverse CDF."""
    q = rng.random(n) - 0.5
    # log1p argument clipped away from -1; affects mass ~1e-15 per draw.
    arg = np.maximum(-2.0 * np.abs(q), -1.0 + 1e-15)
    return -sigma * np.sign(q) * np.log1p(arg)


@dataclass(frozen=True)
class Scenario:
    """One simulation cell: design, noise, regression, and replication plan.

    regression is "doppler" or a callable m(x) vectorized over arrays.
    noise must be a one-dimensional Laplace or Dirac model.
    """

    design: str
    noise: NoiseModel
    regression: object = "doppler"
    n: int = 1024
    s: float = 0.15
    eval_points: tuple = (0.25, 0.90)
    replications: int = 100
    base_seed: int = 12345
    name: str = ""

    def __post_init__(self):
        if self.design not in _DESIGNS:
            raise ConfigurationError(
                f"design must be one of {_DESIGNS}, got {self.design!r}")
        if len(self.noise.components) != 1:
            raise ConfigurationError("scenarios are one-dimensional")
        if self.noise.components[0].kind not in ("laplace", "dirac"):
            raise ConfigurationError("scenario noise must be laplace or dirac")
        if self.regression != "doppler" and not callable(self.regression):
            raise ConfigurationError("regression must be 'doppler' or callable")
        if self.n < 8:
            raise ConfigurationError("need n >= 8")
        if self.s < 0:
            raise ConfigurationError("regression noise level must be >= 0")
        pts = tuple(float(p) for p in self.eval_points)
        if not pts or any(not 0.0 < p < 1.0 for p in pts):
            raise ConfigurationError("evaluation points must lie in (0,1)")
        object.__setattr__(self, "eval_points", pts)
        if self.replications < 0 or self.base_seed < 0:
            raise ConfigurationError("replications and seed must be >= 0")

    @property
    def m_fn(self):
        return doppler if self.regression == "doppler" else self.regression

    @property
    def sigma_gl(self) -> float:
        comp = self.noise.components[0]
        return comp.params[0] if comp.kind == "laplace" else 0.0

    @property
    def scenario_id(self) -> str:
        if self.name:
            return self.name
        comp = self.noise.components[0]
        if comp.kind == "laplace":
            tag = f"{comp.params[0]:.3f}".replace(".", "")
        else:
            tag = "dirac"
        return f"{_DESIGN_SLUGS[self.design]}-{tag}"

    def p_true(self, x0: float) -> float:
        """m(x0) f_X(x0), the target of the projection estimates."""
        return float(self.m_fn(float(x0))) * design_pdf(self.design, x0)


def paper_scenario(design: str, sigma_gl: float, **overrides) -> Scenario:
    """The published simulation cell for a design and Laplace noise scale."""
    sc = Scenario(design=design, noise=NoiseModel.laplace(sigma_gl), **overrides)
    if not sc.name:
        sc = Scenario(design=design, noise=sc.noise,
                      name=f"paper-{sc.scenario_id}", **overrides)
    return sc


def generate_dataset(scenario: Scenario, replication: int) -> Dataset:
    """Draw one replication with the stream seeded by base_seed XOR index.

    Draw order is fixed (X, then epsilon, then delta) so a given
    (scenario, replication) pair is bit-reproducible.
    """
    if replication < 0:
        raise ValueError("replication index must be >= 0")
    rng = np.random.Generator(np.random.Philox(scenario.base_seed ^ replication))
    x = sample_design(rng, scenario.design, scenario.n)
    eps = scenario.s * rng.standard_normal(scenario.n)
    comp = scenario.noise.components[0]
    if comp.kind == "laplace":
        delta = sample_laplace(rng, comp.params[0], scenario.n)
    else:
        delta = np.zeros(scenario.n)
    return Dataset(W=(x + delta)[:, None], Y=scenario.m_fn(x) + eps)


def true_projection(p, j, x: float, scaling: ScalingTable, *,
                    nodes: int = 32, subdivisions: int = 1) -> float:
    """Projection of a function onto the span at resolution j, at a point.

    Computes sum_k p_jk phi_jk(x) with p_jk = int p phi_jk by
    Gauss-Legendre on each unit cell of the scaling support (optionally
    subdivided, e.g. when p itself has kinks on a finer dyadic grid).
    One-dimensional j only.
    """
    j = int(j)
    if j < 0:
        raise ValueError("resolution must be >= 0")
    basis = scaling.basis
    glx, glw = leggauss(nodes)
    step = 1.0 / subdivisions
    starts = basis.s_min + step * np.arange((basis.s_max - basis.s_min)
                                            * subdivisions)
    # t-nodes across the whole support, one GL rule per (sub)cell
    t = (starts[:, None] + 0.5 * step * (glx[None, :] + 1.0)).ravel()
    wt = np.tile(0.5 * step * glw, starts.size)
    phi_t = scaling.eval_phi(t)
    total = 0.0
    for (k,) in active_indices(basis, (j,), (x,)):
        w_k = float(scaling.eval_phi(2.0 ** j * x - k))
        if w_k == 0.0:
            continue
        integral = float(np.sum(wt * np.asarray(p((t + k) / 2.0 ** j)) * phi_t))
        total += w_k * integral
    return total


def oracle_index(dataset: Dataset, x, true_p: float, kernel: DeconvKernel,
                 config: EstimatorConfig | None = None):
    """argmin over the candidate lattice of |p_hat_j(x) - true_p|.

    Ties go to the smallest total level, then lexicographic.
    """
    j_set = enumerate_J(dataset.n, dataset.d, config)
    best = None
    for j in j_set:
        rank = (abs(p_hat(dataset, j, x, kernel) - true_p), j.sort_key())
        if best is None or rank < best[0]:
            best = (rank, j)
    return best[1]


def _oracle_from_stats(stats: dict, j_set, true_p: float):
    best = None
    for j in j_set:
        rank = (abs(stats[j.j][0] - true_p), j.sort_key())
        if best is None or rank < best[0]:
            best = (rank, j)
    return best[1], stats[best[1].j][0]


@dataclass(frozen=True)
class MonteCarloRow:
    """One (replication, evaluation point) outcome; error rows leave the
    numeric fields unset."""

    replication: int
    scenario: str
    x0: float
    j_hat: tuple | None
    p_hat: float | None
    p_hat_oracle: float | None
    j_oracle: tuple | None
    f_hat: float | None
    m_hat: float | None
    abs_err_m: float | None
    abs_err_p: float | None
    error: str = ""

    def values(self) -> tuple:
        return (self.replication, self.scenario, self.x0, self.j_hat,
                self.p_hat, self.p_hat_oracle, self.j_oracle, self.f_hat,
                self.m_hat, self.abs_err_m, self.abs_err_p, self.error)


@dataclass(frozen=True)
class ResultsTable:
    """Monte Carlo output: one row per (replication, evaluation point)."""

    scenario: Scenario
    rows: tuple
    runtime: float = 0.0

    @property
    def failures(self) -> int:
        return sum(1 for r in self.rows if r.error)


def mae(table: ResultsTable, x0: float) -> float:
    """Mean |m_hat - m(x0)| over successful replications at one point."""
    vals = [r.abs_err_m for r in table.rows
            if not r.error and abs(r.x0 - x0) < 1e-12]
    if not vals:
        raise MonteCarloError(f"no successful replications at x0={x0}")
    return float(np.mean(vals))


def default_scaling(level: int = 10) -> ScalingTable:
    """The package default basis: the order-5 coiflet.

    It is the only catalog entry with smoothness rating 4, which the
    pairing gate requires for Laplace noise (nu = 2).
    """
    return tabulate(load_wavelet("coiflet", 5), level=level)


def _point_row(scenario, rep, dataset, x0, est_config, dens_config, kernel):
    j_set = enumerate_J(dataset.n, dataset.d, est_config)
    stats = index_stats(dataset, x0, j_set, kernel)
    max_abs_y = float(np.abs(dataset.Y).max())
    j_hat, diag = select_from_stats(stats, j_set, est_config, dataset.n,
                                    max_abs_y, kernel.model.nu)
    p_sel = diag.records[j_hat.j].p_hat
    p_true = scenario.p_true(x0)
    j_or, p_or = _oracle_from_stats(stats, j_set, p_true)
    h_star = gl_bandwidth(dataset, x0, dens_config, kernel.model)
    fx = f_hat(dataset, x0, h_star, kernel.model)
    m_est = p_sel / max(fx, dataset.n ** -0.5)
    m_true = float(scenario.m_fn(float(x0)))
    return MonteCarloRow(
        replication=rep, scenario=scenario.scenario_id, x0=float(x0),
        j_hat=j_hat.j, p_hat=p_sel, p_hat_oracle=p_or, j_oracle=j_or.j,
        f_hat=fx, m_hat=m_est, abs_err_m=abs(m_est - m_true),
        abs_err_p=abs(p_sel - p_true))


def _one_replication(scenario, rep, est_config, dens_config, kernel):
    dataset = generate_dataset(scenario, rep)
    rows = []
    for x0 in scenario.eval_points:
        try:
            rows.append(_point_row(scenario, rep, dataset, x0,
                                   est_config, dens_config, kernel))
        except (TableRangeError, QuadratureError):
            # extreme noise draw: widen the tables once, then retry
            try:
                for j in enumerate_J(dataset.n, dataset.d, est_config):
                    kernel.widen(j, dataset.W)
                rows.append(_point_row(scenario, rep, dataset, x0,
                                       est_config, dens_config, kernel))
            except (TableRangeError, QuadratureError) as exc:
                rows.append(MonteCarloRow(
                    replication=rep, scenario=scenario.scenario_id,
                    x0=float(x0), j_hat=None, p_hat=None, p_hat_oracle=None,
                    j_oracle=None, f_hat=None, m_hat=None, abs_err_m=None,
                    abs_err_p=None, error=f"{type(exc).__name__}: {exc}"))
    return tuple(rows)


def _map_replications(fn, count: int, threads: int) -> list:
    if threads > 1 and count > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, range(count)))
    return [fn(rep) for rep in range(count)]


def run_monte_carlo(scenario: Scenario, est_config: EstimatorConfig | None = None,
                    dens_config: DensityConfig | None = None, *,
                    kernel: DeconvKernel | None = None, threads: int = 1,
                    cache_dir: str | None = None) -> ResultsTable:
    """Full Monte Carlo pass over the scenario's replications.

    Each replication contributes one row per evaluation point. A
    replication point that still fails after one table-widening retry is
    recorded as an error row; more than 5% such rows raise
    MonteCarloError. Rows are ordered by (replication, point) no matter
    how many threads ran.
    """
    est_config = est_config if est_config is not None else EstimatorConfig()
    dens_config = dens_config if dens_config is not None else DensityConfig()
    if kernel is None:
        kernel = DeconvKernel(default_scaling(), scenario.noise,
                              cache_dir=cache_dir)
    t0 = time.perf_counter()

    def job(rep):
        return _one_replication(scenario, rep, est_config, dens_config, kernel)

    results = _map_replications(job, scenario.replications, threads)
    rows = tuple(row for group in results for row in group)
    failures = sum(1 for r in rows if r.error)
    if rows and failures > 0.05 * len(rows):
        raise MonteCarloError(
            f"{failures} of {len(rows)} replication points failed")
    return ResultsTable(scenario=scenario, rows=rows,
                        runtime=time.perf_counter() - t0)


@dataclass(frozen=True)
class GammaScanRow:
    replication: int
    gamma: float
    j_hat: tuple
    p_hat: float
    abs_err_p: float

    def values(self) -> tuple:
        return (self.replication, self.gamma, self.j_hat, self.p_hat,
                self.abs_err_p)


@dataclass(frozen=True)
class GammaScanResult:
    """Selection-constant sweep: per-replication rows and the risk curve.

    curve[i] = (gamma_i, mean over replications of |p_hat_jhat - p(x0)|),
    recomputable from rows by averaging.
    """

    scenario: Scenario
    x0: float
    rows: tuple
    curve: tuple
    runtime: float = 0.0


def jump_statistic(curve) -> float:
    """Largest adjacent risk ratio on the curve, restricted to gamma <= 2."""
    best = 0.0
    for (g0, r0), (g1, r1) in zip(curve, curve[1:]):
        if g1 > 2.0:
            break
        lo, hi = sorted((r0, r1))
        best = max(best, hi / lo if lo > 0 else np.inf)
    return best


def _config_with_gamma(base: EstimatorConfig, gamma: float) -> EstimatorConfig:
    # a defaulted gamma_tilde tracks the scanned gamma; an explicit one is kept
    tilde = None if base.gamma_tilde == base.gamma else base.gamma_tilde
    return EstimatorConfig(gamma=gamma, gamma_tilde=tilde, eps=base.eps,
                           s=base.s, m_sup=base.m_sup, variant=base.variant,
                           j_override=base.j_override)


def gamma_scan(scenario: Scenario, gamma_grid, x0: float,
               est_config: EstimatorConfig | None = None, *,
               kernel: DeconvKernel | None = None, threads: int = 1,
               cache_dir: str | None = None) -> GammaScanResult:
    """Pointwise risk of the selected estimate along a grid of gamma values.

    The per-index statistics are computed once per replication and reused
    across the grid; only the selection sweep is repeated.
    """
    grid = [float(g) for g in gamma_grid]
    if not grid or any(g <= 0 for g in grid):
        raise ConfigurationError("gamma grid must be positive")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigurationError("gamma grid must be strictly increasing")
    base = est_config if est_config is not None else EstimatorConfig()
    if kernel is None:
        kernel = DeconvKernel(default_scaling(), scenario.noise,
                              cache_dir=cache_dir)
    configs = [_config_with_gamma(base, g) for g in grid]
    p_true = scenario.p_true(x0)
    t0 = time.perf_counter()

    def job(rep):
        dataset = generate_dataset(scenario, rep)
        j_set = enumerate_J(dataset.n, dataset.d, base)
        try:
            stats = index_stats(dataset, x0, j_set, kernel)
        except (TableRangeError, QuadratureError):
            for j in j_set:
                kernel.widen(j, dataset.W)
            stats = index_stats(dataset, x0, j_set, kernel)
        max_abs_y = float(np.abs(dataset.Y).max())
        out = []
        for g, cfg in zip(grid, configs):
            j_hat, diag = select_from_stats(stats, j_set, cfg, dataset.n,
                                            max_abs_y, kernel.model.nu)
            p_sel = diag.records[j_hat.j].p_hat
            out.append(GammaScanRow(replication=rep, gamma=g, j_hat=j_hat.j,
                                    p_hat=p_sel, abs_err_p=abs(p_sel - p_true)))
        return out

    groups = _map_replications(job, scenario.replications, threads)
    rows = tuple(row for group in groups for row in group)
    curve = []
    for i, g in enumerate(grid):
        errs = [group[i].abs_err_p for group in groups]
        if not errs:
            raise MonteCarloError("gamma scan needs at least one replication")
        curve.append((g, float(np.mean(errs))))
    return GammaScanResult(scenario=scenario, x0=float(x0), rows=rows,
                           curve=tuple(curve),
                           runtime=time.perf_counter() - t0)


def _fmt_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, tuple):
        return ";".join(str(int(c)) for c in value)
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def write_results_csv(table: ResultsTable, path) -> None:
    """One CSV row per (replication, point), 17 significant digits."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RESULT_COLUMNS)
        for row in table.rows:
            writer.writerow([_fmt_cell(v) for v in row.values()])


def write_gamma_csv(result: GammaScanResult, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(GAMMA_COLUMNS)
        for row in result.rows:
            writer.writerow([_fmt_cell(v) for v in row.values()])


def write_gamma_curve_csv(result: GammaScanResult, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("gamma", "risk"))
        for g, risk in result.curve:
            writer.writerow([_fmt_cell(g), _fmt_cell(risk)])


def results_summary(table: ResultsTable) -> dict:
    """JSON-ready digest: MAE per point, reliability ratio, failures."""
    sc = table.scenario
    comp = sc.noise.components[0]
    out = {
        "scenario": sc.scenario_id,
        "design": sc.design,
        "noise": ({"kind": "laplace", "sigma": comp.params[0]}
                  if comp.kind == "laplace" else {"kind": "dirac"}),
        "n": sc.n,
        "replications": sc.replications,
        "failures": table.failures,
        "runtime_seconds": table.runtime,
        "mae": {},
    }
    if comp.kind == "laplace":
        r = reliability_ratio(sc.design, comp.params[0])
        out["reliability_ratio"] = r
        out["reliability_display"] = reliability_display(r)
    for x0 in sc.eval_points:
        try:
            out["mae"][f"{x0:g}"] = mae(table, x0)
        except MonteCarloError:
            out["mae"][f"{x0:g}"] = None
    return out


def write_summary_json(summary: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
