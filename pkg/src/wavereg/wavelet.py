"""Compactly supported father wavelets and their numerical realization.

Scaling functions are loaded from an embedded catalog of orthonormal filter
coefficients (Daubechies 2-10, coiflets 1-5), tabulated on dyadic grids by
the cascade algorithm, and evaluated as tensor products
phi_jk(x) = prod_l 2^{j_l/2} phi(2^{j_l} x_l - k_l). The Fourier transform
F(phi)(t) = int e^{-itx} phi(x) dx is computed from the truncated infinite
product of the filter transfer function, independent of the cascade tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .filters import COIFLETS, DAUBECHIES

__all__ = [
    "WaveletBasis",
    "ScalingTable",
    "ResolutionIndex",
    "load_wavelet",
    "tabulate",
    "eval_phi_jk",
    "active_indices",
    "fourier_phi",
]

# Catalog ratings used by the noise-pairing gate (regularity >= nu + 2).
# Integer smoothness classes: conservative for the short filters, 4 for
# coiflet-5 whose Fourier decay supports second-order polynomial division.
_REGULARITY = {
    ("daubechies", 2): 2, ("daubechies", 3): 2, ("daubechies", 4): 2,
    ("daubechies", 5): 2, ("daubechies", 6): 2, ("daubechies", 7): 3,
    ("daubechies", 8): 3, ("daubechies", 9): 3, ("daubechies", 10): 3,
    ("coiflet", 1): 2, ("coiflet", 2): 2, ("coiflet", 3): 3,
    ("coiflet", 4): 3, ("coiflet", 5): 4,
}


@dataclass(frozen=True)
class WaveletBasis:
    """An orthonormal scaling function described by its two-scale filter.

    Attributes
    ----------
    family : str
        "daubechies" or "coiflet".
    order : int
        Catalog order (filter length is 2*order for Daubechies, 6*order
        for coiflets).
    filter : tuple of float
        Low-pass coefficients c_n with sum sqrt(2), indexed from s_min.
    s_min, s_max : int
        Integer support interval of phi; support length equals
        filter length - 1.
    regularity : int
        Integer smoothness rating used by pairing checks.
    vanishing_moments : int
        Degree N up to which the projection kernel reproduces polynomials.
    """

    family: str
    order: int
    filter: tuple[float, ...]
    s_min: int
    s_max: int
    regularity: int
    vanishing_moments: int

    @property
    def radius(self) -> int:
        """Support radius A = max(|s_min|, |s_max|)."""
        return max(abs(self.s_min), abs(self.s_max))

    def transfer(self, xi: np.ndarray) -> np.ndarray:
        """Transfer function m0(xi) = 2^{-1/2} sum_n c_n e^{-i xi n}."""
        xi = np.asarray(xi, dtype=float)
        z = np.exp(-1j * xi)
        acc = np.full(z.shape, self.filter[-1], dtype=complex)
        for c in self.filter[-2::-1]:
            acc = acc * z + c
        acc *= np.exp(-1j * xi * self.s_min) / np.sqrt(2.0)
        return acc


@dataclass(frozen=True)
class ResolutionIndex:
    """A vector of per-axis dyadic scales j with total level S = sum j_l."""

    j: tuple[int, ...]

    def __post_init__(self):
        if not self.j or any(int(v) != v or v < 0 for v in self.j):
            raise ValueError("resolution index must be non-negative integers")
        object.__setattr__(self, "j", tuple(int(v) for v in self.j))

    @classmethod
    def coerce(cls, j) -> "ResolutionIndex":
        if isinstance(j, ResolutionIndex):
            return j
        if np.isscalar(j):
            return cls((int(j),))
        return cls(tuple(int(v) for v in j))

    @property
    def S(self) -> int:
        return sum(self.j)

    @property
    def d(self) -> int:
        return len(self.j)

    def meet(self, other: "ResolutionIndex") -> "ResolutionIndex":
        """Componentwise minimum (j ^ j')_l = min(j_l, j'_l)."""
        other = ResolutionIndex.coerce(other)
        if other.d != self.d:
            raise ValueError("meet requires equal dimensions")
        return ResolutionIndex(tuple(min(a, b) for a, b in zip(self.j, other.j)))

    def sort_key(self) -> tuple:
        """Total level first, then lexicographic; the tie-break order."""
        return (self.S, self.j)

    def __iter__(self):
        return iter(self.j)


def load_wavelet(family: str, order: int) -> WaveletBasis:
    """Look up a scaling filter in the embedded catalog.

    Parameters
    ----------
    family : str
        "coiflet" or "daubechies" (case-insensitive).
    order : int
        Coiflets 1-5 or Daubechies 2-10.

    Returns
    -------
    WaveletBasis

    Raises
    ------
    ValueError
        If the (family, order) pair is not in the catalog.
    """
    fam = str(family).strip().lower()
    if fam in ("coiflet", "coif"):
        if order not in COIFLETS:
            raise ValueError(f"unknown order {order!r} for coiflet (have 1-5)")
        filt = COIFLETS[order]
        s_min = -2 * order
        n_vanish = 2 * order - 1
        fam = "coiflet"
    elif fam in ("daubechies", "db", "daub"):
        if order not in DAUBECHIES:
            raise ValueError(f"unknown order {order!r} for daubechies (have 2-10)")
        filt = DAUBECHIES[order]
        s_min = 0
        n_vanish = order - 1
        fam = "daubechies"
    else:
        raise ValueError(f"unknown wavelet family {family!r}")
    return WaveletBasis(
        family=fam,
        order=int(order),
        filter=tuple(float(c) for c in filt),
        s_min=s_min,
        s_max=s_min + len(filt) - 1,
        regularity=_REGULARITY[(fam, int(order))],
        vanishing_moments=n_vanish,
    )


@dataclass(frozen=True)
class ScalingTable:
    """phi and its first two derivatives on the dyadic grid 2^{-L} Z.

    The grid covers exactly [s_min, s_max]; derivative columns are filled by
    second-order central differences, with the single cell at each boundary
    set to 0. Evaluation between nodes uses linear interpolation and returns
    0 outside the support.
    """

    basis: WaveletBasis
    level: int
    phi: np.ndarray = field(repr=False)
    dphi: np.ndarray = field(repr=False)
    d2phi: np.ndarray = field(repr=False)

    @property
    def step(self) -> float:
        return 2.0 ** -self.level

    @property
    def x(self) -> np.ndarray:
        """Grid abscissae from s_min to s_max inclusive."""
        return self.basis.s_min + self.step * np.arange(self.phi.size)

    def _lookup(self, values: np.ndarray, x):
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        xv = np.atleast_1d(x)
        pos = (xv - self.basis.s_min) * 2.0 ** self.level
        inside = (pos >= 0.0) & (pos <= values.size - 1.0)
        pos = np.clip(pos, 0.0, values.size - 1.0)
        lo = np.minimum(pos.astype(np.int64), values.size - 2)
        frac = pos - lo
        out = np.where(inside, values[lo] * (1.0 - frac) + values[lo + 1] * frac, 0.0)
        return float(out[0]) if scalar else out

    def eval_phi(self, x) -> np.ndarray:
        """phi(x) by linear interpolation; 0 outside [s_min, s_max]."""
        return self._lookup(self.phi, x)

    def eval_dphi(self, x) -> np.ndarray:
        return self._lookup(self.dphi, x)

    def eval_d2phi(self, x) -> np.ndarray:
        return self._lookup(self.d2phi, x)


def _values_at_integers(basis: WaveletBasis, deriv: int = 0) -> np.ndarray:
    """Exact phi^{(deriv)} on the integers.

    Differentiating the two-scale relation deriv times shows the integer
    values form an eigenvector of the transition matrix at eigenvalue
    2^{-deriv}. The scale is fixed by polynomial reproduction: sum phi = 1,
    sum a phi'(a) = -1, sum a^2 phi''(a) = 2 (the latter two use that the
    first scaling-function moments vanish for every catalog family).
    """
    c = np.asarray(basis.filter)
    n = basis.s_max - basis.s_min + 1
    # interior integers only; phi and its derivatives vanish at the endpoints
    interior = np.arange(basis.s_min + 1, basis.s_max)
    m = np.zeros((interior.size, interior.size))
    for a, xa in enumerate(interior):
        for b, xb in enumerate(interior):
            k = 2 * xa - xb
            if basis.s_min <= k <= basis.s_max:
                m[a, b] = np.sqrt(2.0) * c[k - basis.s_min]
    w, v = np.linalg.eig(m)
    target = 2.0 ** -deriv
    pick = np.argmin(np.abs(w - target))
    if abs(w[pick] - target) > 1e-8:
        raise ValueError(
            f"transition matrix lacks eigenvalue {target} for "
            f"{basis.family}-{basis.order}"
        )
    vec = np.real(v[:, pick])
    if deriv == 0:
        vec /= vec.sum()
    elif deriv == 1:
        vec /= -np.dot(interior, vec)
    else:
        vec /= np.dot(interior.astype(float) ** 2, vec) / 2.0
    out = np.zeros(n)
    out[1:-1] = vec
    return out


def _refine(c: np.ndarray, start: np.ndarray, level: int, factor: float) -> np.ndarray:
    """Dyadic refinement of integer samples through the two-scale relation.

    factor is sqrt(2) 2^deriv: differentiating the relation multiplies the
    right side by 2 per derivative order. Exact at dyadic rationals.
    """
    width = start.size - 1
    values = start
    for lev in range(1, level + 1):
        prev = values
        values = np.zeros(width * 2 ** lev + 1)
        values[::2] = prev
        # new midpoints x = s_min + (2i+1) 2^{-lev} put 2x - n at coarse
        # index base + 2i + 1 with base = -n 2^{lev-1}
        odd = np.zeros(width * 2 ** (lev - 1))
        for idx, cn in enumerate(c):
            base = -idx * 2 ** (lev - 1)
            lo = max(0, (-base) // 2)
            hi = min(odd.size, (prev.size - 2 - base) // 2 + 1)
            if lo < hi:
                odd[lo:hi] += cn * prev[base + 1 + 2 * np.arange(lo, hi)]
        values[1::2] = factor * odd
    return values


def tabulate(basis: WaveletBasis, level: int = 10) -> ScalingTable:
    """Run the cascade algorithm down to grid step 2^{-level}.

    Integer values come from eigenvectors of the two-scale transition
    matrix; each refinement step fills the new midpoints through the
    two-scale relation, which is exact at dyadic rationals. First and (for
    regularity >= 3) second derivatives are refined the same way from
    their own integer eigenvectors, so the derivative tables carry no
    finite-difference bias; for rougher bases the second derivative falls
    back to a central difference of the first.

    Parameters
    ----------
    basis : WaveletBasis
    level : int
        Refinement level L >= 6; grid step is 2^{-L}.

    Returns
    -------
    ScalingTable
    """
    if level < 6:
        raise ValueError("refinement level must be at least 6")
    c = np.asarray(basis.filter)
    root2 = np.sqrt(2.0)
    values = _refine(c, _values_at_integers(basis, 0), level, root2)
    dphi = _refine(c, _values_at_integers(basis, 1), level, 2.0 * root2)
    if basis.regularity >= 3:
        d2phi = _refine(c, _values_at_integers(basis, 2), level, 4.0 * root2)
    else:
        h = 2.0 ** -level
        d2phi = np.zeros_like(values)
        d2phi[1:-1] = (dphi[2:] - dphi[:-2]) / (2.0 * h)
    return ScalingTable(basis=basis, level=level, phi=values, dphi=dphi, d2phi=d2phi)


def active_indices(basis: WaveletBasis, j, x) -> list[tuple[int, ...]]:
    """All translation vectors k with phi_jk(x) possibly nonzero.

    Per axis these are the integers k_l with |2^{j_l} x_l - k_l| <= A; the
    result is their Cartesian product, of size at most (2A+1)^d.
    """
    j = ResolutionIndex.coerce(j)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if xs.size != j.d:
        raise ValueError("x and j dimensions differ")
    a = basis.radius
    per_axis = []
    for jl, xl in zip(j, xs):
        center = xl * 2 ** jl
        lo = int(np.ceil(center - a))
        hi = int(np.floor(center + a))
        per_axis.append(range(lo, hi + 1))
    return [tuple(k) for k in itertools.product(*per_axis)]


def axis_shift_range(basis: WaveletBasis, jl: int, xl: float) -> np.ndarray:
    """Active translations along one axis, as an integer array."""
    a = basis.radius
    center = float(xl) * 2 ** jl
    return np.arange(int(np.ceil(center - a)), int(np.floor(center + a)) + 1)


def eval_phi_jk(table: ScalingTable, j, k, x) -> float:
    """Tensor-product basis value prod_l 2^{j_l/2} phi(2^{j_l} x_l - k_l)."""
    j = ResolutionIndex.coerce(j)
    ks = np.atleast_1d(np.asarray(k, dtype=float))
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if not (j.d == ks.size == xs.size):
        raise ValueError("j, k, x dimensions differ")
    out = 1.0
    for jl, kl, xl in zip(j, ks, xs):
        out *= 2.0 ** (jl / 2.0) * float(table.eval_phi(2.0 ** jl * xl - kl))
    return out


def fourier_phi(basis: WaveletBasis, t, k_trunc: int = 25):
    """F(phi)(t) = int e^{-itx} phi(x) dx via the transfer-function product.

    Uses F(phi)(t) = prod_{k=1}^{k_trunc} m0(t / 2^k), exact at t = 0 and
    conjugate-symmetric for real phi. Accepts scalars or arrays.
    """
    if k_trunc < 25:
        raise ValueError("transfer-product truncation must be at least 25")
    ts = np.asarray(t, dtype=float)
    out = np.ones(ts.shape, dtype=complex)
    for k in range(1, k_trunc + 1):
        out *= basis.transfer(ts / 2.0 ** k)
    if out.ndim == 0:
        return complex(out)
    return out
