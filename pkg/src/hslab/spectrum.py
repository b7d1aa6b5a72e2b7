"""Linearized spectrum of the HS bubble, sector by sector.

In sector ``k`` the weighted eigenproblem is

    -psi'' + (k(k+N-2) + eps^2) psi = mu U^{2*-2} psi   on (-L, L),  psi(+-L) = 0,

discretized with second-order differences and a lumped (diagonal) weight.
With the bubble normalized in L^{2*}, the ground state is U itself and
mu_1 = S_gamma.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.linalg import eigh_tridiagonal
from scipy.sparse.linalg import eigsh

from .cylinder import Grid, angular_eigenvalue, bubble_values, harmonic_dim
from .errors import RangeError
from .params import Params, make_params, spectral_gap_formula

TIE_RTOL = 1e-9


def _tridiag(p: Params, g: Grid, k: int):
    """Diagonal and off-diagonal of the Dirichlet difference operator on interior nodes."""
    m = g.n - 2
    diag = np.full(m, 2.0 / g.h**2 + angular_eigenvalue(p.N, k) + p.eps**2)
    off = np.full(m - 1, -1.0 / g.h**2)
    return diag, off


def _weight(p: Params, g: Grid, scale: float = 1.0) -> np.ndarray:
    return scale * bubble_values(p, g, 0.0, p.two_star - 2.0)[1:-1]


def sturm_count(diag: np.ndarray, off: np.ndarray, w: np.ndarray, mu: float) -> int:
    """Number of eigenvalues of (T, diag(w)) strictly below mu, by Sylvester inertia of T - mu W."""
    d = diag - mu * w
    count = 0
    piv = d[0]
    tiny = np.finfo(float).tiny
    for i in range(d.size):
        if i:
            piv = d[i] - off[i - 1] ** 2 / piv
        if piv == 0.0:
            piv = -tiny
        if piv < 0.0:
            count += 1
    return count


def sector_eigpairs(p: Params, g: Grid, k: int, m: int, weight_scale: float = 1.0):
    """Lowest m eigenpairs in sector k; eigenvectors are returned on the full grid (zero at +-L)."""
    if k < 0:
        raise RangeError("sector degree must be >= 0")
    if m < 1:
        raise RangeError("number of eigenvalues must be >= 1")
    if m > (g.n - 2) // 10:
        raise RangeError(
            f"{m} eigenvalues exceed what a grid of {g.n} points resolves (at most {(g.n - 2) // 10})"
        )
    diag, off = _tridiag(p, g, k)
    w = _weight(p, g, weight_scale)
    A = sparse.diags([off, diag, off], [-1, 0, 1], format="csc")
    W = sparse.diags(w, format="csc")
    vals, vecs = eigsh(A, k=m, M=W, sigma=0.0, which="LM", v0=np.ones(diag.size))
    order = np.argsort(vals)
    vals, vecs = vals[order], vecs[:, order]
    # fix the sign so that the first nonnegligible entry is positive
    for j in range(m):
        col = vecs[:, j]
        lead = col[np.argmax(np.abs(col) > 1e-8 * np.max(np.abs(col)))]
        if lead < 0:
            vecs[:, j] = -col
    full = np.zeros((g.n, m))
    full[1:-1] = vecs
    return vals, full


def sector_eigs(p: Params, g: Grid, k: int, m: int, weight_scale: float = 1.0) -> np.ndarray:
    return sector_eigpairs(p, g, k, m, weight_scale)[0]


def lowest_certified(p: Params, g: Grid, k: int, vals: np.ndarray, weight_scale: float = 1.0) -> bool:
    """True if exactly len(vals) eigenvalues lie at or below max(vals), i.e. none were skipped."""
    diag, off = _tridiag(p, g, k)
    w = _weight(p, g, weight_scale)
    top = float(vals[-1]) * (1.0 + 1e-10)
    return sturm_count(diag, off, w, top) == len(vals)


@dataclass(frozen=True)
class SpectrumResult:
    per_sector: dict
    global_order: list
    mu1: float
    mu2: float
    mu3: float
    gap: float
    mu3_sector: int
    ratios: tuple
    third_is_degree_one: bool
    certified: bool


def spectral_gap_numeric(p: Params, g: Grid, kmax: int = 6, m0: int = 3) -> SpectrumResult:
    """Global ordering of the low spectrum over sectors 0..kmax.

    Distinct eigenvalues are listed once, each tagged with its sector and
    multiplicity D(k).  mu1, mu2, mu3 are the three lowest entries.
    """
    if kmax < 3:
        raise RangeError("kmax must be >= 3")
    per = {}
    certified = True
    for k in range(kmax + 1):
        vals = sector_eigs(p, g, k, m0 if k == 0 else 1)
        certified &= lowest_certified(p, g, k, vals)
        per[k] = vals
    order = sorted(
        (float(mu), k, j, harmonic_dim(p.N, k)) for k, vals in per.items() for j, mu in enumerate(vals)
    )
    mu1, mu2, mu3 = (order[i][0] for i in range(3))
    k3 = order[3 - 1][1]
    # the third eigenspace is purely degree-1 unless another sector ties with it
    others = [e for e in order if e[1] != 1 and abs(e[0] - mu3) <= TIE_RTOL * mu3]
    return SpectrumResult(
        per_sector={k: v.tolist() for k, v in per.items()},
        global_order=[list(e) for e in order],
        mu1=mu1,
        mu2=mu2,
        mu3=mu3,
        gap=1.0 - mu2 / mu3,
        mu3_sector=k3,
        ratios=(1.0, mu2 / mu1, mu3 / mu1),
        third_is_degree_one=bool(k3 == 1 and not others),
        certified=bool(certified),
    )


def gap_sweep(N: int, n_gamma: int = 10, grid_for=None, kmax: int = 6) -> list:
    """Rows (gamma, gap_numeric, gap_formula, mu3_sector) on fractions 0.05..0.95 of the gamma range."""
    from .cylinder import default_grid

    grid_for = grid_for or default_grid
    gmax = (N - 2) ** 2 / 4.0
    rows = []
    for frac in np.linspace(0.05, 0.95, n_gamma):
        p = make_params(N, frac * gmax)
        r = spectral_gap_numeric(p, grid_for(p), kmax)
        rows.append((p.gamma, r.gap, spectral_gap_formula(p), r.mu3_sector))
    return rows


def hardy_bound(N: int, k0: int) -> float:
    return (N - 2) ** 2 / 4.0 + k0 * (N - 2 + k0)


def improved_hardy_check(N: int, k0: int, g: Grid, n_sectors: int = 4) -> float:
    """Smallest Dirichlet Rayleigh quotient of the Hardy form over sectors k > k0, minus the bound.

    On the cylinder, |grad u|^2 against u^2/|x|^2 becomes
    psi'^2 + (k(k+N-2) + (N-2)^2/4) psi^2 against psi^2.
    """
    if k0 < 0:
        raise RangeError("k0 must be >= 0")
    m = g.n - 2
    best = np.inf
    for k in range(k0 + 1, k0 + 1 + n_sectors):
        diag = np.full(m, 2.0 / g.h**2 + angular_eigenvalue(N, k) + (N - 2) ** 2 / 4.0)
        off = np.full(m - 1, -1.0 / g.h**2)
        lo = eigh_tridiagonal(diag, off, eigvals_only=True, select="i", select_range=(0, 0))[0]
        best = min(best, float(lo))
    return best - hardy_bound(N, k0)


def hardy_field_margin(f, k0: int) -> float:
    """Hardy quotient of a field orthogonal to degrees <= k0, minus the improved bound."""
    from .cylinder import norm_eps_sq

    low = [s.k for s in f.sectors if s.k <= k0 and np.any(s.values)]
    if low:
        raise RangeError(
            f"field has content in sectors {low}; the improved bound needs degrees > {k0}"
        )
    N = f.params.N
    num = norm_eps_sq(f, eps=(N - 2) / 2.0)
    den = f.params.sphere_area * f.grid.h * sum(np.sum(s.values**2) for s in f.sectors)
    return num / den - hardy_bound(N, k0)
