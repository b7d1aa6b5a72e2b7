import numpy as np
import pytest
import scipy.linalg

from hslab import spectrum
from hslab.cylinder import CylinderField, Grid, default_grid, hs_bubble, apply_operator
from hslab.errors import RangeError
from hslab.params import gamma_c_star, hardy_sobolev_constant, make_params, spectral_gap_formula


@pytest.fixture(scope="module")
def res4(p4, g4):
    return spectrum.spectral_gap_numeric(p4, g4)


def test_first_two_ratios(res4, p4):
    assert res4.mu1 == pytest.approx(hardy_sobolev_constant(p4), rel=1e-3)
    assert res4.ratios[0] == 1.0
    assert res4.ratios[1] == pytest.approx(p4.two_star - 1, abs=1e-3)


def test_gap_matches_formula(res4, p4):
    assert res4.gap == pytest.approx(spectral_gap_formula(p4), abs=1e-3)
    assert res4.certified


def test_gap_at_half_critical():
    p = make_params(4, gamma_c_star(4) / 2)
    r = spectrum.spectral_gap_numeric(p, default_grid(p))
    assert r.gap == pytest.approx(spectral_gap_formula(p), abs=1e-3)
    assert r.mu3_sector == 1 and r.third_is_degree_one


def test_gap_sweep_n5_small():
    rows = spectrum.gap_sweep(5, n_gamma=3)
    for gamma, num, formula, _ in rows:
        assert num == pytest.approx(formula, abs=1e-3)


def test_lowest_is_simple_radial(res4):
    mu, k, j, mult = res4.global_order[0]
    assert (k, j, mult) == (0, 0, 1) and mu == res4.mu1


def test_weight_scale_invariance(p4, g4):
    a = spectrum.sector_eigs(p4, g4, 0, 3)
    b = spectrum.sector_eigs(p4, g4, 0, 3, weight_scale=7.0)
    assert np.allclose(a, 7.0 * b, rtol=1e-10)


def test_sector_monotonicity(p4, g4):
    lows = [spectrum.sector_eigs(p4, g4, k, 1)[0] for k in range(5)]
    assert np.all(np.diff(lows) > 0)


def test_sturm_count_matches_dense():
    p = make_params(4, 0.5)
    g = Grid(12.0, 241)
    diag, off = spectrum._tridiag(p, g, 1)
    w = spectrum._weight(p, g)
    T = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    ev = scipy.linalg.eigh(T, np.diag(w), eigvals_only=True)
    for mu in (ev[0] * 0.9, 0.5 * (ev[2] + ev[3]), 2 * ev[5]):
        assert spectrum.sturm_count(diag, off, w, mu) == int(np.sum(ev < mu))


def test_eigenvectors_fixed_sign(p4, g4):
    _, vecs = spectrum.sector_eigpairs(p4, g4, 0, 2)
    assert vecs[0, 0] == 0 and vecs[-1, 0] == 0
    assert np.all(vecs[:, 0] >= -1e-12 * np.max(np.abs(vecs[:, 0])))


@pytest.mark.parametrize("refine,tol", [(1, 1e-4), (2, 1e-5)])
def test_analytic_eigenpair_residual(p4, g4, refine, tol):
    # -u'' + eps^2 u = S_gamma U^{2*-2} u holds for the bubble; the FD operator sees O(h^2) error
    g4 = Grid(g4.L, refine * (g4.n - 1) + 1)
    u = hs_bubble(p4, g4).sector(0)
    sg = hardy_sobolev_constant(p4)
    diag, off = spectrum._tridiag(p4, g4, 0)
    v = u[1:-1]
    Av = diag * v
    Av[:-1] += off * v[1:]
    Av[1:] += off * v[:-1]
    r = Av - sg * spectrum._weight(p4, g4) * v
    assert np.linalg.norm(r) / np.linalg.norm(Av) <= tol


def test_too_many_eigenvalues(p4):
    g = Grid(40.0, 41)
    with pytest.raises(RangeError, match="exceed"):
        spectrum.sector_eigs(p4, g, 0, 4)


def test_kmax_floor(p4, g4):
    with pytest.raises(RangeError):
        spectrum.spectral_gap_numeric(p4, g4, kmax=2)


@pytest.mark.parametrize("N,k0", [(4, 0), (4, 1), (5, 0), (3, 2)])
def test_improved_hardy(N, k0):
    g = Grid(40.0, 4001)
    margin = spectrum.improved_hardy_check(N, k0, g)
    assert margin >= 0
    assert margin == pytest.approx(N - 1 + 2 * k0, rel=1e-3)


def test_hardy_field_margin(p4, g4):
    f = CylinderField.from_sectors(p4, g4, {1: np.exp(-(g4.t**2)), 3: np.exp(-((g4.t - 2) ** 2))})
    assert spectrum.hardy_field_margin(f, 0) > 0
    with pytest.raises(RangeError, match="sectors"):
        spectrum.hardy_field_margin(f, 1)


def test_grid_convergence(p4, g4):
    a = spectrum.spectral_gap_numeric(p4, g4).gap
    b = spectrum.spectral_gap_numeric(p4, Grid(g4.L, 2 * (g4.n - 1) + 1)).gap
    assert abs(a - b) <= 1e-4


def test_gap_weight_invariance(p4, g4):
    a = spectrum.sector_eigs(p4, g4, 0, 2)
    b = spectrum.sector_eigs(p4, g4, 0, 2, weight_scale=0.01)
    c1 = spectrum.sector_eigs(p4, g4, 1, 1)
    c2 = spectrum.sector_eigs(p4, g4, 1, 1, weight_scale=0.01)
    assert abs(a[1] / c1[0] - b[1] / c2[0]) <= 1e-12
