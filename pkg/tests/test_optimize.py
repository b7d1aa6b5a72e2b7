import numpy as np
import pytest

from hslab import optimize
from hslab.cylinder import CylinderField, default_grid, hs_bubble
from hslab.errors import ConvergenceError, RangeError
from hslab.manifold import quotient_value
from hslab.params import gamma_c_star, make_params, spectral_gap_formula, two_peak_level


@pytest.fixture(scope="module")
def run4(p4, g4):
    return optimize.minimize_radial_quotient(p4, g4)


def test_history_nonincreasing(run4):
    qs = [q for _, q in run4.history]
    assert np.all(np.diff(qs) <= 0)
    assert run4.converged


def test_estimate_below_both_levels(run4, p4):
    assert run4.c_rad_estimate < min(spectral_gap_formula(p4), two_peak_level(4))
    assert optimize.bound_check(p4, run4.c_rad_estimate)["below"]


def test_estimate_is_the_minimizer_quotient(run4):
    assert quotient_value(run4.minimizer) == pytest.approx(run4.c_rad_estimate, rel=1e-12)


def test_minimizer_even(run4):
    v = run4.minimizer.sector(0)
    assert np.array_equal(v, v[::-1])


def test_transport_across_gamma(run4):
    for g2 in (0.6, 0.9):
        q2 = optimize.transported_quotient(run4, make_params(4, g2))
        assert q2 == pytest.approx(run4.c_rad_estimate, rel=1e-3)


def test_scale_invariance(run4):
    assert optimize.scale_invariance_gap(run4.minimizer) <= 1e-12


def test_nonradial_init_rejected(p4, g4):
    f = CylinderField.from_sectors(p4, g4, {0: hs_bubble(p4, g4).sector(0), 1: np.exp(-(g4.t**2))})
    with pytest.raises(RangeError, match="sector-0"):
        optimize.minimize_radial_quotient(p4, g4, f)


def test_collapse_without_restarts(p4, g4):
    u = hs_bubble(p4, g4)
    with pytest.raises(ConvergenceError, match="restarts"):
        optimize.minimize_radial_quotient(p4, g4, u, optimize.MinimizeOptions(max_restarts=0))


def test_collapse_recovers_with_restart(p4, g4):
    res = optimize.minimize_radial_quotient(p4, g4, hs_bubble(p4, g4), optimize.MinimizeOptions(max_iter=5))
    assert res.restarts == 1


def test_gamma0_interior():
    r = optimize.gamma0_from_estimate(4, 0.45)
    assert 0 < r["gamma0"] < gamma_c_star(4) and not r["clamped"]
    assert abs(r["residual"]) <= 1e-10


def test_gamma0_at_top_of_branch():
    r = optimize.gamma0_from_estimate(5, 4 / 9)
    assert r["gamma0"] == pytest.approx(gamma_c_star(5), rel=1e-10)


def test_gamma0_rejects_n3():
    with pytest.raises(RangeError):
        optimize.gamma0_from_estimate(3, 0.3)


def test_third_direction_norm(p4, g4):
    rho = optimize.third_radial_direction(p4, g4)
    u = hs_bubble(p4, g4)
    assert optimize.energy(CylinderField.radial(p4, g4, rho)) == pytest.approx(optimize.energy(u), rel=1e-12)
    assert rho[0] == 0.0 and rho[-1] == 0.0


def test_n5_short_run():
    p = make_params(5, 1.0)
    g = default_grid(p)
    res = optimize.minimize_radial_quotient(p, g, opts=optimize.MinimizeOptions(max_iter=15))
    assert res.history[-1][1] <= res.history[0][1]
