from __future__ import annotations

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from wavereg import (
    Dataset,
    DeconvKernel,
    EstimatorConfig,
    NoiseModel,
    ResolutionIndex,
    active_indices,
    enumerate_J,
    eval_phi_jk,
    load_wavelet,
    p_hat,
    sigma_hat_sq,
    sigma_tilde_sq,
    tabulate,
    u_values,
)
from wavereg.errors import ConfigurationError
from wavereg.estimator import (
    gamma_of_j,
    gamma_pair,
    gamma_star,
    index_stats,
    penalty_constants,
    select_from_stats,
    select_j_hat,
)


@pytest.fixture(scope="module")
def scaling():
    return tabulate(load_wavelet("coiflet", 5))


@pytest.fixture(scope="module")
def dirac_kernel(scaling):
    return DeconvKernel(scaling, NoiseModel.dirac())


@pytest.fixture(scope="module")
def laplace_kernel(scaling):
    return DeconvKernel(scaling, NoiseModel.laplace(0.075))


def sample(n: int, seed: int = 0) -> Dataset:
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.0, 1.0, n)
    y = np.sin(2 * np.pi * x) + 0.1 * rng.standard_normal(n)
    return Dataset(x, y)


def test_dataset_requires_two_rows():
    with pytest.raises(ValueError):
        Dataset(np.array([0.5]), np.array([1.0]))


def test_dataset_row_coercion():
    d = Dataset(np.array([0.1, 0.2, 0.3]), np.array([1.0, 2.0, 3.0]))
    assert d.W.shape == (3, 1)
    assert d.n == 3
    assert d.d == 1


def test_dataset_mismatched_rows():
    with pytest.raises(ValueError):
        Dataset(np.zeros((4, 1)), np.zeros(3))


def test_u_values_scale_with_y(dirac_kernel):
    d = sample(40)
    zeros = Dataset(d.W, np.zeros(d.n))
    ones = Dataset(d.W, np.ones(d.n))
    assert_allclose(u_values(zeros, (2,), (0.4,), dirac_kernel), 0.0, atol=0)
    tj = dirac_kernel.tj_values((2,), (0.4,), d.W)
    assert_allclose(u_values(ones, (2,), (0.4,), dirac_kernel), tj, atol=0)


def test_p_hat_is_mean_of_u(laplace_kernel):
    d = sample(60)
    u = u_values(d, (1,), (0.3,), laplace_kernel)
    assert p_hat(d, (1,), (0.3,), laplace_kernel) == pytest.approx(float(u.mean()), rel=1e-14)


def test_p_hat_invariant_under_duplication(laplace_kernel):
    d = sample(50)
    doubled = Dataset(np.vstack([d.W, d.W]), np.concatenate([d.Y, d.Y]))
    a = p_hat(d, (2,), (0.5,), laplace_kernel)
    b = p_hat(doubled, (2,), (0.5,), laplace_kernel)
    assert b == pytest.approx(a, rel=1e-12)


def test_sigma_hat_sq_edge_values():
    assert sigma_hat_sq(np.full(17, 3.25)) == 0.0
    assert sigma_hat_sq(np.array([0.0, 1.0])) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        sigma_hat_sq(np.array([1.0]))


def test_sigma_hat_sq_matches_pairwise_double_sum():
    # the statistic is defined as (1/(n(n-1))) sum_{l != v} (U_l - U_v)^2 / 2
    rng = np.random.default_rng(5)
    u = rng.standard_normal(50)
    n = u.size
    literal = sum((a - b) ** 2 for a in u for b in u) / (2.0 * n * (n - 1))
    assert sigma_hat_sq(u) == pytest.approx(literal, rel=1e-12)


def test_sigma_hat_sq_pairwise_identity_bulk():
    rng = np.random.default_rng(99)
    for _ in range(100):
        u = rng.standard_normal(rng.integers(2, 30))
        n = u.size
        diff = u[:, None] - u[None, :]
        literal = float((diff**2).sum()) / (2.0 * n * (n - 1))
        assert sigma_hat_sq(u) == pytest.approx(literal, rel=1e-10, abs=1e-12)


def test_penalty_constants_vanish_without_kernel_mass():
    cfg = EstimatorConfig()
    assert penalty_constants(cfg, 0.0, 1000, 2.0) == (0.0, 0.0)
    cfg_t = EstimatorConfig(variant="theoretical", m_sup=0.5, s=0.15)
    assert penalty_constants(cfg_t, 0.0, 1000, 2.0) == (0.0, 0.0)


def test_penalty_constants_theoretical_formulas():
    cfg = EstimatorConfig(gamma=1.0, variant="theoretical", m_sup=0.5, s=0.15)
    c_big, c_small = penalty_constants(cfg, 10.0, 1024, 99.0)
    want_big = (0.5 + 0.15 * math.sqrt(2.0 * math.log(1024))) * 10.0
    assert c_big == pytest.approx(want_big, rel=1e-12)
    assert c_small == pytest.approx(16.0 * (2.0 * 0.5 + 0.15) * 10.0, rel=1e-12)
    assert c_small == pytest.approx(184.0, rel=1e-12)


def test_penalty_constants_practical_formulas():
    c_big, c_small = penalty_constants(EstimatorConfig(), 10.0, 1024, 0.9)
    assert c_big == 0.0
    assert c_small == pytest.approx(6.0, rel=1e-12)


def test_sigma_tilde_sq_reduces_and_inflates():
    assert sigma_tilde_sq(0.37, 0.0, 1.0, 500) == pytest.approx(0.37, rel=1e-14)
    got = sigma_tilde_sq(0.37, 2.0, 1.5, 500)
    ln = math.log(500)
    want = 0.37 + 2 * 2.0 * math.sqrt(2 * 1.5 * 0.37 * ln / 500) + 8 * 1.5 * 4.0 * ln / 500
    assert got == pytest.approx(want, rel=1e-12)
    assert got >= 0.37


def test_gamma_pair_collapses_for_nested_indices():
    j = ResolutionIndex((1, 1))
    finer = ResolutionIndex((2, 3))
    gammas = {(1, 1): 0.25, (2, 3): 0.4}
    # j meet finer = j, so the pair penalty is 2 Gamma(j)
    assert gamma_pair(gammas, j, finer) == pytest.approx(0.5)


def test_gamma_pair_zero_penalties():
    j_set = [ResolutionIndex((a,)) for a in range(3)]
    gammas = {j.j: 0.0 for j in j_set}
    assert gamma_star(gammas, j_set[1], j_set) == 0.0


def test_gamma_star_dominates_every_pair():
    rng = np.random.default_rng(2)
    j_set = [ResolutionIndex((a, b)) for a in range(3) for b in range(2)]
    gammas = {j.j: float(rng.uniform(0.1, 1.0)) for j in j_set}
    for j in j_set:
        star = gamma_star(gammas, j, j_set)
        assert star == pytest.approx(max(gamma_pair(gammas, j, jp) for jp in j_set))
        for jp in j_set:
            assert star >= gamma_pair(gammas, j, jp) - 1e-15


def test_gamma_of_j_unknown_index():
    with pytest.raises(ConfigurationError):
        gamma_of_j({(0,): 0.1}, (3,))


def test_enumerate_J_univariate_cap():
    got = enumerate_J(1024, 1)
    assert [j.j for j in got] == [(0,), (1,), (2,), (3,), (4,)]


def test_enumerate_J_bivariate_simplex():
    got = enumerate_J(1024, 2)
    assert len(got) == 15
    assert all(sum(j.j) <= 4 for j in got)
    # sorted by total level then lexicographically
    keys = [j.sort_key() for j in got]
    assert keys == sorted(keys)


def test_enumerate_J_small_sample_floor():
    assert [j.j for j in enumerate_J(8, 1)] == [(0,)]
    with pytest.raises(ValueError):
        enumerate_J(7, 1)


def test_enumerate_J_override():
    got = enumerate_J(1024, 1, EstimatorConfig(j_override=2))
    assert [j.j for j in got] == [(0,), (1,), (2,)]


def test_enumerate_J_closed_under_meet():
    got = enumerate_J(256, 2)
    members = {j.j for j in got}
    for a in got:
        for b in got:
            assert a.meet(b).j in members


def test_config_validation():
    with pytest.raises(ConfigurationError):
        EstimatorConfig(gamma=0.0)
    with pytest.raises(ConfigurationError):
        EstimatorConfig(gamma_tilde=-1.0)
    with pytest.raises(ConfigurationError):
        EstimatorConfig(eps=0.0)
    with pytest.raises(ConfigurationError):
        EstimatorConfig(s=-0.1)
    with pytest.raises(ConfigurationError):
        EstimatorConfig(variant="bogus")
    with pytest.raises(ConfigurationError):
        EstimatorConfig(variant="theoretical")  # needs m_sup and s


def test_gamma_tilde_defaults_to_gamma():
    cfg = EstimatorConfig(gamma=0.8)
    assert cfg.gamma_tilde == 0.8


def test_theory_warning_thresholds():
    assert EstimatorConfig(gamma=0.5).theory_warning(0.0)
    quiet = EstimatorConfig(gamma=1.5, gamma_tilde=4.5)
    assert not quiet.theory_warning(0.0)
    assert quiet.theory_warning(2.0)


def test_selection_returns_risk_argmin(laplace_kernel):
    d = sample(200, seed=3)
    j_hat, diag = select_j_hat(d, (0.5,), EstimatorConfig(), laplace_kernel)
    j_set = enumerate_J(d.n, 1)
    assert j_hat in j_set
    best = min(j_set, key=lambda j: (diag[j].r_hat, j.sort_key()))
    assert j_hat == best


def test_selection_singleton_candidate_set(laplace_kernel):
    d = sample(100, seed=4)
    cfg = EstimatorConfig(j_override=0)
    j_hat, diag = select_j_hat(d, (0.5,), cfg, laplace_kernel)
    assert j_hat == ResolutionIndex((0,))
    assert diag[(0,)].r_hat == pytest.approx(2.0 * diag[(0,)].gamma, rel=1e-12)


def reference_rhat(stats, j_set, cfg, n, max_abs_y):
    # a from-scratch rewrite of the selection functional, kept deliberately
    # naive: dictionaries of Gamma values and explicit double loops
    ln = math.log(n)
    gam = {}
    for j in j_set:
        p, v, sup = stats[j.j]
        c = 2.0 * max_abs_y * sup / 3.0
        gam[j.j] = math.sqrt(2.0 * cfg.gamma * (1.0 + cfg.eps) * v * ln / n) + c * cfg.gamma * ln / n
    out = {}
    for j in j_set:
        star = max(gam[j.j] + gam[j.meet(jp).j] for jp in j_set)
        gap = 0.0
        for jp in j_set:
            excess = abs(stats[j.meet(jp).j][0] - stats[jp.j][0]) - (
                gam[jp.j] + gam[jp.meet(j).j]
            )
            gap = max(gap, excess)
        out[j.j] = gap + star
    return out


def test_selection_matches_independent_reimplementation(laplace_kernel):
    d = sample(300, seed=8)
    cfg = EstimatorConfig()
    j_set = enumerate_J(d.n, 1)
    stats = index_stats(d, (0.4,), j_set, laplace_kernel)
    max_abs_y = float(np.abs(d.Y).max())
    j_hat, diag = select_from_stats(stats, j_set, cfg, d.n, max_abs_y, 2.0)
    want = reference_rhat(stats, j_set, cfg, d.n, max_abs_y)
    for j in j_set:
        assert diag[j].r_hat == pytest.approx(want[j.j], rel=1e-10, abs=1e-12)
    best = min(j_set, key=lambda j: (want[j.j], j.sort_key()))
    assert j_hat == best


def test_selection_equivariant_under_response_scaling(laplace_kernel):
    lam = 3.0
    d = sample(250, seed=6)
    scaled = Dataset(d.W, lam * d.Y)
    cfg = EstimatorConfig()
    j1, diag1 = select_j_hat(d, (0.6,), cfg, laplace_kernel)
    j2, diag2 = select_j_hat(scaled, (0.6,), cfg, laplace_kernel)
    assert j1 == j2
    for j in enumerate_J(d.n, 1):
        assert diag2[j].p_hat == pytest.approx(lam * diag1[j].p_hat, rel=1e-12)
        assert diag2[j].r_hat == pytest.approx(lam * diag1[j].r_hat, rel=1e-10)


def test_gamma_term_nondecreasing_in_gamma(laplace_kernel):
    d = sample(150, seed=9)
    j_set = enumerate_J(d.n, 1)
    stats = index_stats(d, (0.5,), j_set, laplace_kernel)
    y_max = float(np.abs(d.Y).max())
    _, low = select_from_stats(stats, j_set, EstimatorConfig(gamma=0.5), d.n, y_max, 2.0)
    _, high = select_from_stats(stats, j_set, EstimatorConfig(gamma=1.0), d.n, y_max, 2.0)
    for j in j_set:
        assert high[j].gamma >= low[j].gamma


def test_dirac_estimate_equals_direct_projection(scaling, dirac_kernel):
    # with exact covariates the deconvolution estimator must collapse to
    # the classical projection-kernel mean
    basis = scaling.basis
    d = sample(200, seed=12)

    def direct(j: int, x: float) -> float:
        total = 0.0
        for wu, yu in zip(d.W[:, 0], d.Y):
            inner = 0.0
            for k in active_indices(basis, (j,), (x,)):
                inner += eval_phi_jk(scaling, (j,), k, (x,)) * eval_phi_jk(
                    scaling, (j,), k, (wu,)
                )
            total += yu * inner
        return total / d.n

    for j, x in ((0, 0.5), (2, 0.3), (3, 0.71)):
        assert p_hat(d, (j,), (x,), dirac_kernel) == pytest.approx(
            direct(j, x), abs=1e-8
        )
