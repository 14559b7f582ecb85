"""Projection estimates and the resolution-selection rule.

The estimator of p = m f_X at a point x is the empirical mean of
U_u = Y_u T_j(W_u); the resolution index j is picked from a finite lattice
J by comparing pairwise estimate gaps against penalties built from variance
statistics of the U sequence (a Goldenshluger-Lepski rule).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .deconv import DeconvKernel
from .errors import ConfigurationError
from .wavelet import ResolutionIndex

_VARIANTS = ("practical", "theoretical")


@dataclass(frozen=True)
class Dataset:
    """Observed sample: noisy covariate rows W and responses Y."""

    W: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        w = np.atleast_2d(np.asarray(self.W, dtype=float))
        y = np.asarray(self.Y, dtype=float).ravel()
        if w.shape[0] != y.size:
            # a 1-d W given as a row: interpret entries as n scalar rows
            if w.shape[0] == 1 and w.shape[1] == y.size:
                w = w.T
            else:
                raise ValueError("W and Y row counts differ")
        if y.size < 2:
            raise ValueError("need n >= 2 observations")
        object.__setattr__(self, "W", w)
        object.__setattr__(self, "Y", y)

    @property
    def n(self) -> int:
        return self.Y.size

    @property
    def d(self) -> int:
        return self.W.shape[1]


@dataclass(frozen=True)
class EstimatorConfig:
    """Constants of the selection rule.

    Parameters
    ----------
    gamma : float
        Selection constant. The oracle-inequality conditions want
        gamma > nu + 1; the practical default 0.5 deliberately ignores
        them (see `theory_warning`).
    gamma_tilde : float, optional
        Variance-inflation constant; defaults to gamma.
    eps : float
        The (1 + eps) factor inside the main penalty term.
    s : float
        Regression noise standard deviation (theoretical variant).
    m_sup : float
        Bound on the sup norm of the regression function (theoretical
        variant).
    variant : {"practical", "theoretical"}
        practical: sigma-hat replaces sigma-tilde inside the penalty and
        c_j = 2 max|Y| |T_j|_inf / 3. theoretical: the displayed formulas
        verbatim.
    j_override : int, optional
        Cap S_j <= j_override instead of the sample-size rule.
    """

    gamma: float = 0.5
    gamma_tilde: float | None = None
    eps: float = 0.1
    s: float = 0.0
    m_sup: float = 0.0
    variant: str = "practical"
    j_override: int | None = None

    def __post_init__(self):
        if self.gamma_tilde is None:
            object.__setattr__(self, "gamma_tilde", self.gamma)
        if self.gamma <= 0 or self.gamma_tilde <= 0:
            raise ConfigurationError("gamma and gamma_tilde must be positive")
        if self.eps <= 0:
            raise ConfigurationError("eps must be positive")
        if self.s < 0 or self.m_sup < 0:
            raise ConfigurationError("s and m_sup must be nonnegative")
        if self.variant not in _VARIANTS:
            raise ConfigurationError(
                f"variant must be one of {_VARIANTS}, got {self.variant!r}")
        if self.variant == "theoretical" and (self.m_sup <= 0 or self.s <= 0):
            raise ConfigurationError(
                "theoretical variant needs m_sup > 0 and s > 0")

    def theory_warning(self, nu: float) -> bool:
        """True when the oracle-inequality conditions on gamma are violated."""
        return self.gamma <= nu + 1 or self.gamma_tilde <= 2 * (nu + 2)


@dataclass(frozen=True)
class IndexRecord:
    """Everything computed for one candidate index."""

    p_hat: float
    sigma_hat_sq: float
    sigma_tilde_sq: float
    c_big: float
    c_small: float
    gamma: float
    gamma_star: float
    r_hat: float
    sup_tj: float


@dataclass
class IndexDiagnostics:
    """Per-index records of a selection run, keyed by the index tuple."""

    records: dict[tuple[int, ...], IndexRecord] = field(default_factory=dict)
    warning: bool = False

    def __getitem__(self, j) -> IndexRecord:
        return self.records[ResolutionIndex.coerce(j).j]


def u_values(dataset: Dataset, j, x, kernel: DeconvKernel) -> np.ndarray:
    """U_u = Y_u T_j(W_u) for every observation."""
    return dataset.Y * kernel.tj_values(j, x, dataset.W)


def p_hat(dataset: Dataset, j, x, kernel: DeconvKernel) -> float:
    """Pointwise projection estimate: the mean of the U sequence."""
    return float(np.mean(u_values(dataset, j, x, kernel)))


def sigma_hat_sq(u: np.ndarray) -> float:
    """Variance statistic of the U sequence.

    The pairwise form (1/(n(n-1))) sum_{l<v} (U_l - U_v)^2 collapses
    algebraically to the unbiased sample variance, which is how it is
    computed; tests check the identity against the literal double sum.
    """
    u = np.asarray(u, dtype=float)
    if u.size < 2:
        raise ValueError("need at least two values")
    return float(np.var(u, ddof=1))


def penalty_constants(config: EstimatorConfig, sup_tj: float, n: int,
                      max_abs_y: float) -> tuple[float, float]:
    """(C_j, c_j) for one index.

    C_j = (m_sup + s sqrt(2 gamma_tilde log n)) |T_j|_inf enters the
    variance inflation; c_j is the linear penalty coefficient, replaced in
    the practical variant by 2 max|Y| |T_j|_inf / 3.
    """
    if config.variant == "theoretical":
        c_big = (config.m_sup
                 + config.s * np.sqrt(2.0 * config.gamma_tilde * np.log(n))) * sup_tj
        c_small = 16.0 * (2.0 * config.m_sup + config.s) * sup_tj
    else:
        c_big = 0.0
        c_small = 2.0 * max_abs_y * sup_tj / 3.0
    return float(c_big), float(c_small)


def sigma_tilde_sq(sig_hat: float, c_big: float, gamma_tilde: float,
                   n: int) -> float:
    """Inflated variance: sigma^2 + 2 C sqrt(2 gt sigma^2 log n / n)
    + 8 gt C^2 log n / n."""
    ln = np.log(n)
    return float(sig_hat
                 + 2.0 * c_big * np.sqrt(2.0 * gamma_tilde * sig_hat * ln / n)
                 + 8.0 * gamma_tilde * c_big ** 2 * ln / n)


def _gamma_term(config: EstimatorConfig, v_j: float, c_small: float,
                n: int) -> float:
    # Gamma(j) = sqrt(2 gamma (1+eps) v_j log n / n) + c_j gamma log n / n
    ln = np.log(n)
    return float(np.sqrt(2.0 * config.gamma * (1.0 + config.eps) * v_j * ln / n)
                 + c_small * config.gamma * ln / n)


def gamma_of_j(gammas: dict, j) -> float:
    """Gamma(j) from a populated per-index map."""
    key = ResolutionIndex.coerce(j).j
    if key not in gammas:
        raise ConfigurationError(f"no diagnostic computed for index {key}")
    return gammas[key]


def gamma_pair(gammas: dict, j, j_prime) -> float:
    """Gamma(j, j') = Gamma(j) + Gamma(j meet j')."""
    ja = ResolutionIndex.coerce(j)
    jb = ResolutionIndex.coerce(j_prime)
    return gamma_of_j(gammas, ja) + gamma_of_j(gammas, ja.meet(jb))


def gamma_star(gammas: dict, j, j_set) -> float:
    """sup over j' in the candidate set of Gamma(j, j')."""
    return max(gamma_pair(gammas, j, jp) for jp in j_set)


def enumerate_J(n: int, d: int, config: EstimatorConfig | None = None) -> list:
    """Candidate lattice: all j in N^d with 2^{S_j} <= floor(n / log^2 n).

    Natural logarithm; with j_override set, the cap is S_j <= j_override
    instead. Returned sorted by (S_j, lexicographic), which also puts every
    meet of two members before both of them.
    """
    if n < 8:
        raise ValueError("need n >= 8 to enumerate candidate indices")
    if config is not None and config.j_override is not None:
        s_max = int(config.j_override)
    else:
        cap = int(np.floor(n / np.log(n) ** 2))
        s_max = int(np.floor(np.log2(cap)))
    out = []

    def fill(prefix, budget):
        if len(prefix) == d:
            out.append(ResolutionIndex(tuple(prefix)))
            return
        for jl in range(budget + 1):
            fill(prefix + [jl], budget - jl)

    fill([], s_max)
    return sorted(out, key=lambda ix: ix.sort_key())


def index_stats(dataset: Dataset, x, j_set, kernel: DeconvKernel) -> dict:
    """Per-index statistics that do not depend on the selection constants.

    Returns {j tuple: (p_hat, sigma_hat_sq, sup |T_j|)}. Shared by the
    selection rule and by scans that re-run selection under many gamma
    values on one dataset.
    """
    out = {}
    for j in j_set:
        u = u_values(dataset, j, x, kernel)
        out[j.j] = (float(np.mean(u)), sigma_hat_sq(u), kernel.sup_tj(j, x))
    return out


def select_from_stats(stats: dict, j_set, config: EstimatorConfig, n: int,
                      max_abs_y: float,
                      nu: float) -> tuple[ResolutionIndex, IndexDiagnostics]:
    """Selection sweep over precomputed per-index statistics."""
    p = {}
    sig = {}
    sigt = {}
    consts = {}
    gammas = {}
    sups = {}
    for j in j_set:
        key = j.j
        p[key], sig[key], sups[key] = stats[key]
        c_big, c_small = penalty_constants(config, sups[key], n, max_abs_y)
        consts[key] = (c_big, c_small)
        sigt[key] = sigma_tilde_sq(sig[key], c_big, config.gamma_tilde, n)
        v_j = sigt[key] if config.variant == "theoretical" else sig[key]
        gammas[key] = _gamma_term(config, v_j, c_small, n)

    records = {}
    best = None
    for j in j_set:
        key = j.j
        g_star = gamma_star(gammas, j, j_set)
        gap = 0.0
        for jp in j_set:
            meet = j.meet(jp).j
            slack = abs(p[meet] - p[jp.j]) - gamma_pair(gammas, jp, j)
            gap = max(gap, slack)
        r_hat = gap + g_star
        records[key] = IndexRecord(
            p_hat=p[key], sigma_hat_sq=sig[key], sigma_tilde_sq=sigt[key],
            c_big=consts[key][0], c_small=consts[key][1], gamma=gammas[key],
            gamma_star=g_star, r_hat=r_hat, sup_tj=sups[key])
        rank = (r_hat, j.sort_key())
        if best is None or rank < best[0]:
            best = (rank, j)

    diag = IndexDiagnostics(records=records, warning=config.theory_warning(nu))
    return best[1], diag


def select_j_hat(dataset: Dataset, x, config: EstimatorConfig,
                 kernel: DeconvKernel) -> tuple[ResolutionIndex, IndexDiagnostics]:
    """Pick the resolution index minimizing the selection functional.

    R_j = sup_{j'} {|p_{j meet j'} - p_{j'}| - Gamma(j', j)}_+ + Gamma*(j),
    with the asymmetric Gamma(j', j) = Gamma(j') + Gamma(j' meet j) exactly
    as displayed in the source rule; ties go to the smallest S_j, then
    lexicographically smallest j.

    Returns
    -------
    (ResolutionIndex, IndexDiagnostics)
    """
    j_set = enumerate_J(dataset.n, dataset.d, config)
    stats = index_stats(dataset, x, j_set, kernel)
    max_abs_y = float(np.abs(dataset.Y).max())
    return select_from_stats(stats, j_set, config, dataset.n, max_abs_y,
                             kernel.model.nu)
