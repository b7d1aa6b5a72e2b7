import warnings

import numpy as np
import pytest

from hslab import manifold
from hslab.cylinder import CylinderField, Grid, default_grid, hs_bubble, norm_eps_sq
from hslab.errors import BracketEscapeWarning, DegenerateQuotientError
from hslab.families import two_peak_field
from hslab.params import critical_levels, hardy_sobolev_constant, make_params


@pytest.fixture(scope="module")
def gshift(p4):
    return default_grid(p4, shift=6.0)


@pytest.mark.parametrize("s0", [0.0, 1.3, -2.4])
def test_m_of_bubble(p4, gshift, s0):
    m, s = manifold.m_functional(hs_bubble(p4, gshift, s0))
    assert m == pytest.approx(1.0, abs=1e-10)
    assert s == pytest.approx(s0, abs=1e-6)


def test_m_ignores_nonradial_sectors(p4, g4):
    u = hs_bubble(p4, g4).sector(0)
    f = CylinderField.from_sectors(p4, g4, {0: u + 0.1 * np.exp(-g4.t**2), 1: np.exp(-(g4.t**2)), 2: u})
    assert manifold.m_functional(f) == manifold.m_functional(f.restrict([0]))


@pytest.mark.parametrize("c,s0", [(1.0, 0.0), (2.5, 1.3), (-0.7, -3.0)])
def test_dist_of_manifold_points(p4, gshift, c, s0):
    f = c * hs_bubble(p4, gshift, s0)
    via_m, direct = manifold.dist_squared(f)
    scale = norm_eps_sq(f)
    assert abs(via_m) <= 1e-9 * scale and abs(direct) <= 1e-9 * scale


def test_bump_quotient_in_unit_interval(p4, g4):
    f = CylinderField.radial(p4, g4, np.exp(-(g4.t**2)))
    rep = manifold.be_quotient(f)
    assert 0 < rep.quotient < 1
    assert rep.dist2 == pytest.approx(rep.dist2_direct, rel=1e-8)
    assert rep.deficit > 0


def test_quotient_bounded_by_one_on_perturbations(p4, g4):
    rng = np.random.default_rng(3)
    u = hs_bubble(p4, g4).sector(0)
    for _ in range(5):
        bump = rng.normal() * np.exp(-((g4.t - rng.uniform(-5, 5)) ** 2) / rng.uniform(0.5, 4))
        q = manifold.quotient_value(CylinderField.radial(p4, g4, u + 0.3 * bump))
        assert 0 < q <= 1


def test_degenerate_quotient(p4, g4):
    with pytest.raises(DegenerateQuotientError, match="degenerate"):
        manifold.be_quotient(hs_bubble(p4, g4))
    with pytest.raises(DegenerateQuotientError):
        manifold.quotient_value(2.0 * hs_bubble(p4, g4))


def test_homogeneity(p4, g4):
    f = CylinderField.from_sectors(p4, g4, {0: np.exp(-(g4.t**2)), 1: 0.3 * np.exp(-((g4.t - 1) ** 2))})
    q = manifold.quotient_value(f)
    for c in (1e-3, 0.5, -4.0, 1e3):
        assert manifold.quotient_value(c * f) == pytest.approx(q, rel=1e-12)


def test_translation_covariance(p4):
    g = Grid(60.0, 4801)
    j = 40
    base = np.exp(-((g.t / 2) ** 2))
    f = CylinderField.radial(p4, g, base)
    shifted = CylinderField.radial(p4, g, np.roll(base, j))
    m1, s1 = manifold.m_functional(f)
    m2, s2 = manifold.m_functional(shifted)
    assert m2 == pytest.approx(m1, rel=1e-10)
    # U[s](t) = U(t + s), so moving f to the right moves the argmax to the left
    assert s2 - s1 == pytest.approx(-j * g.h, abs=1e-6)
    assert manifold.quotient_value(shifted) == pytest.approx(manifold.quotient_value(f), rel=1e-10)


def test_far_mass_triggers_bracket_warning(p4, g4):
    f = CylinderField.radial(p4, g4, np.exp(-((g4.t - 0.75 * g4.L) ** 2)))
    with pytest.warns(BracketEscapeWarning):
        manifold.m_search(f)


def test_tie_resolved_to_smallest_shift(p4):
    g = default_grid(p4, shift=8.0)
    f = hs_bubble(p4, g, -5.0) + hs_bubble(p4, g, 5.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BracketEscapeWarning)
        _, s = manifold.m_functional(f)
    assert s < 0


def test_two_peak_below_level(p4):
    g = default_grid(p4, shift=12.0)
    lvl = critical_levels(p4).two_peak
    for s in (6.0, 10.0, 12.0):
        q = manifold.quotient_value(two_peak_field(p4, g, s))
        assert q < lvl


def test_quotient_dimension_scaling_of_sg():
    p = make_params(5, 1.5)
    g = default_grid(p)
    u = hs_bubble(p, g)
    assert norm_eps_sq(u) == pytest.approx(hardy_sobolev_constant(p), rel=1e-6)
