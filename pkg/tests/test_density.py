from __future__ import annotations

import numpy as np
import pytest
from scipy.special import sici

from wavereg import (
    Dataset,
    DeconvKernel,
    DensityConfig,
    EstimatorConfig,
    NoiseModel,
    enumerate_J,
    estimate_m,
    f_hat,
    gl_bandwidth,
    load_wavelet,
    tabulate,
)
from wavereg.errors import ConfigurationError

LAPLACE = NoiseModel.laplace(0.075)
DIRAC = NoiseModel.dirac()


def uniform_sample(n: int, seed: int = 0) -> Dataset:
    rng = np.random.default_rng(seed)
    return Dataset(rng.uniform(0.0, 1.0, n), np.zeros(n))


def test_dirac_density_is_sinc_kde():
    # without covariate noise f_hat must match the Fourier-cutoff KDE
    # (1/nh) sum_u sin((x - W_u)/h) / (pi (x - W_u)/h)
    d = uniform_sample(400)
    w = d.W[:, 0]
    h = 0.1
    for x in np.linspace(0.05, 0.95, 50):
        u = (x - w) / h
        k = np.where(np.abs(u) < 1e-12, 1.0 / np.pi, np.sin(u) / (np.pi * u))
        assert f_hat(d, (x,), h, DIRAC) == pytest.approx(k.mean() / h, abs=1e-5)


def test_laplace_density_matches_closed_form_kernel():
    # 1/psi(t/h) = 1 + (sigma/h)^2 t^2 gives the deconvoluting kernel
    # K - (sigma/h)^2 K'' in closed form
    d = uniform_sample(400)
    w = d.W[:, 0]
    h, s = 0.1, 0.075

    def kernel(u):
        u = np.asarray(u, dtype=float)
        small = np.abs(u) < 1e-8
        us = np.where(small, 1.0, u)
        k = np.where(small, 1.0 / np.pi, np.sin(us) / (np.pi * us))
        k2 = ((2.0 - us**2) * np.sin(us) - 2.0 * us * np.cos(us)) / (np.pi * us**3)
        k2 = np.where(small, -1.0 / (3.0 * np.pi), k2)
        return k - (s / h) ** 2 * k2

    for x in np.linspace(0.05, 0.95, 50):
        want = kernel((x - w) / h).mean() / h
        assert f_hat(d, (x,), h, LAPLACE) == pytest.approx(want, abs=1e-5)


def test_density_estimate_is_unbiased_for_smoothed_target():
    # E f_hat(x) = (K_h * f_X)(x) exactly, whatever the noise; for the
    # cutoff kernel, h = 0.1 and uniform f_X that is (2/pi) Si(5) at x = 1/2
    target = 2.0 * sici(5.0)[0] / np.pi
    vals = []
    for rep in range(60):
        rng = np.random.default_rng(1000 + rep)
        x = rng.uniform(0.0, 1.0, 2000)
        delta = rng.laplace(0.0, 0.075, 2000)
        vals.append(f_hat(Dataset(x + delta, np.zeros(2000)), (0.5,), 0.1, LAPLACE))
    se = np.std(vals, ddof=1) / np.sqrt(len(vals))
    assert abs(np.mean(vals) - target) < 3.0 * se


def test_f_hat_validation():
    d = uniform_sample(50)
    with pytest.raises(ValueError):
        f_hat(d, (0.5,), 0.0, DIRAC)
    with pytest.raises(ValueError):
        f_hat(d, (0.5, 0.5), 0.1, DIRAC)


def test_config_validation():
    with pytest.raises(ConfigurationError):
        DensityConfig(bandwidths=())
    with pytest.raises(ConfigurationError):
        DensityConfig(bandwidths=(0.2, 0.1))
    with pytest.raises(ConfigurationError):
        DensityConfig(bandwidths=(-0.1, 0.2))
    with pytest.raises(ConfigurationError):
        DensityConfig(kappa=0.0)
    with pytest.raises(ConfigurationError):
        DensityConfig(grid_size=0)
    with pytest.raises(ConfigurationError):
        DensityConfig(cutoff_kernel=False)


def test_default_grid_geometry():
    grid = DensityConfig().grid(1024, 2.0)
    assert len(grid) == 20
    assert grid[0] == pytest.approx(1024.0 ** (-1.0 / 5.0) / 4.0, rel=1e-12)
    assert grid[-1] == pytest.approx(1.0, rel=1e-12)
    ratios = np.diff(np.log(np.asarray(grid)))
    assert np.allclose(ratios, ratios[0])


def test_gl_bandwidth_contained_and_deterministic():
    d = uniform_sample(300, seed=2)
    cfg = DensityConfig()
    h1 = gl_bandwidth(d, (0.5,), cfg, LAPLACE)
    h2 = gl_bandwidth(d, (0.5,), cfg, LAPLACE)
    assert h1 == h2
    assert h1 in cfg.grid(d.n, LAPLACE.nu)


def test_gl_bandwidth_singleton_grid():
    d = uniform_sample(100, seed=3)
    cfg = DensityConfig(bandwidths=(0.25,))
    assert gl_bandwidth(d, (0.5,), cfg, DIRAC) == 0.25


def test_gl_bandwidth_huge_penalty_picks_largest():
    # once kappa dwarfs every pairwise gap only the V(h) term is left,
    # which decreases in h for the deconvolution kernel
    d = uniform_sample(200, seed=4)
    cfg = DensityConfig(kappa=1e6)
    grid = cfg.grid(d.n, LAPLACE.nu)
    assert gl_bandwidth(d, (0.5,), cfg, LAPLACE) == grid[-1]


@pytest.fixture(scope="module")
def laplace_kernel():
    return DeconvKernel(tabulate(load_wavelet("coiflet", 5)), LAPLACE)


def test_estimate_report_denominator_identity(laplace_kernel):
    rng = np.random.default_rng(5)
    x = rng.uniform(0.0, 1.0, 500)
    y = np.sin(2 * np.pi * x) + 0.15 * rng.standard_normal(500)
    d = Dataset(x + rng.laplace(0.0, 0.075, 500), y)
    rep = estimate_m(d, (0.5,), EstimatorConfig(), DensityConfig(), laplace_kernel)
    assert rep.denominator == max(rep.f_hat, d.n ** -0.5)
    assert rep.m_hat == pytest.approx(rep.p_hat / rep.denominator, rel=1e-14)
    assert rep.denominator >= d.n ** -0.5
    assert rep.j_hat in {j.j for j in enumerate_J(d.n, 1)}


def test_estimate_report_floor_activates_in_empty_regions(laplace_kernel):
    # all mass near 0 leaves f_hat(0.95) below the n^{-1/2} floor
    rng = np.random.default_rng(6)
    x = rng.uniform(0.0, 0.05, 400)
    y = 1.0 + 0.1 * rng.standard_normal(400)
    d = Dataset(x + rng.laplace(0.0, 0.075, 400), y)
    rep = estimate_m(d, (0.95,), EstimatorConfig(), DensityConfig(), laplace_kernel)
    assert rep.f_hat < d.n ** -0.5
    assert rep.denominator == d.n ** -0.5
    assert rep.m_hat == pytest.approx(rep.p_hat * np.sqrt(d.n), rel=1e-12)


def test_density_floor_is_rarely_active_in_the_bulk():
    floors = 0
    cfg = DensityConfig()
    for rep in range(200):
        rng = np.random.default_rng(2000 + rep)
        x = rng.uniform(0.0, 1.0, 1000)
        d = Dataset(x + rng.laplace(0.0, 0.075, 1000), np.zeros(1000))
        h = gl_bandwidth(d, (0.5,), cfg, LAPLACE)
        if f_hat(d, (0.5,), h, LAPLACE) < 1000 ** -0.5:
            floors += 1
    assert floors <= 10
