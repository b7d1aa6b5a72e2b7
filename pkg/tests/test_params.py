import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hslab import params
from hslab.errors import MissingRadialConstantError, RangeError
from hslab.params import make_params


def test_derived_fields_n4():
    p = make_params(4, 0.75)
    assert (p.eps, p.theta, p.beta_minus, p.beta_plus, p.two_star, p.a) == pytest.approx(
        (0.5, 0.5, 0.5, 1.5, 4.0, 0.5), abs=1e-15
    )
    assert p.q == pytest.approx(12.0, rel=1e-14)


def test_derived_fields_n3():
    p = make_params(3, 3 / 16)
    assert p.eps == pytest.approx(0.25, abs=1e-15)
    assert p.theta == pytest.approx(0.5, abs=1e-15)


def test_sobolev_limit_of_theta():
    assert make_params(4, 1e-12).theta == pytest.approx(1.0, abs=1e-11)


@pytest.mark.parametrize("N,gamma", [(4, 0.0), (4, 1.0), (4, -0.1), (3, 0.25), (2, 0.1)])
def test_out_of_range_rejected(N, gamma):
    with pytest.raises(RangeError, match="interval|dimension"):
        make_params(N, gamma)


def test_range_error_names_interval():
    with pytest.raises(RangeError, match=r"\(0, 1\)"):
        make_params(4, 2.0)


@given(st.integers(3, 12), st.floats(0.001, 0.999))
def test_invariants(N, frac):
    p = make_params(N, frac * (N - 2) ** 2 / 4)
    assert 0 < p.theta < 1 and 0 < p.eps < (N - 2) / 2
    assert p.beta_minus * p.beta_plus == pytest.approx(p.gamma, rel=1e-12)
    assert p.beta_minus + p.beta_plus == pytest.approx(N - 2, rel=1e-12)
    assert 0 < p.a < (N - 2) / 2
    assert p.a * (N - 2 - p.a) == pytest.approx(p.gamma, rel=1e-12)


@pytest.mark.parametrize("N", range(3, 11))
def test_sobolev_constant_matches_closed_form(N):
    assert params.sobolev_constant(N) == pytest.approx(params.sobolev_constant_closed_form(N), rel=1e-8)


def test_sobolev_constant_values():
    assert params.sobolev_constant(4) == pytest.approx(8 * math.pi / math.sqrt(6), rel=1e-12)
    assert params.sobolev_constant(3) == pytest.approx(0.75 * (2 * math.pi**2) ** (2 / 3), rel=1e-12)
    assert params.sech_power_integral(4) == pytest.approx(4 / 3, rel=1e-12)
    for N in range(3, 9):
        assert params.sech_power_integral(N) == pytest.approx(params.sech_power_integral_closed_form(N), rel=1e-12)


def test_hardy_sobolev_constant(p4):
    sg = params.hardy_sobolev_constant(p4)
    assert sg == pytest.approx(2 ** -1.5 * params.sobolev_constant(4), rel=1e-14)
    assert sg == pytest.approx(3.6276, abs=1e-4)
    assert sg / params.sobolev_constant(4) == pytest.approx(0.353553, abs=1e-6)
    assert params.hardy_sobolev_constant(make_params(4, 1e-12)) == pytest.approx(params.sobolev_constant(4), rel=1e-10)


def test_lambda_examples(p4):
    assert params.spectral_gap_formula(p4) == 0.5
    pc = make_params(4, params.gamma_c_star(4))
    assert pc.q == pytest.approx(8.0, rel=1e-14)
    assert params.spectral_gap_formula(pc) == pytest.approx(0.5, abs=1e-14)


@pytest.mark.parametrize("N", [3, 4, 5, 7, 10])
def test_lambda_monotone_and_continuous(N):
    gmax = (N - 2) ** 2 / 4
    lam = [params.spectral_gap_formula(make_params(N, g)) for g in np.linspace(0, gmax, 202)[1:-1]]
    assert np.all(np.diff(lam) >= -1e-15)
    gcs = params.gamma_c_star(N)
    left = params._lambda_of_gamma(N, gcs)
    right = params._lambda_of_gamma(N, gcs * (1 + 1e-15))
    assert left == pytest.approx(right, abs=1e-10)


def test_lambda_near_zero():
    assert params._lambda_of_gamma(4, 1e-12) < 1e-6


def test_thresholds():
    assert params.gamma_c_star(4) == pytest.approx(5 / 8)
    t3 = params.gamma_thresholds(3)
    assert t3["gamma0"] == pytest.approx((1 - (3 / 7) ** 1.5) / 4, rel=1e-14)
    assert t3["gamma0"] == pytest.approx(0.179856, abs=5e-6)
    assert t3["gamma_c_star"] == pytest.approx(1 / 6) and t3["gamma_c_star"] < t3["gamma0"]
    with pytest.raises(MissingRadialConstantError, match="requires radial constant"):
        params.gamma_thresholds(4)


def test_gamma0_root_and_clamping():
    r = params.gamma_thresholds(4, 0.45)
    assert params._lambda_of_gamma(4, r["gamma0"]) == pytest.approx(0.45, abs=1e-10)
    assert not r["clamped"]
    top = params.solve_gamma0(4, 0.5)
    assert top.gamma0 == pytest.approx(5 / 8) and not top.clamped
    assert params.solve_gamma0(4, 0.7).clamped
    assert params.solve_gamma0(4, -0.1).clamped


def test_critical_levels(p4):
    lv = params.critical_levels(p4)
    assert lv.local == 0.5
    assert lv.two_peak == pytest.approx(0.585786, abs=1e-6)
    assert lv.hidden == pytest.approx(0.646447, abs=1e-6)
    assert lv.local_below_hidden and lv.local_below_two_peak
    assert params.critical_levels(make_params(4, 1e-12)).hidden == pytest.approx(0.0, abs=1e-11)


@pytest.mark.parametrize("N", range(4, 11))
def test_level_ordering_scan(N):
    assert np.all(params.level_ordering_scan(N, 100)["holds"])


def test_level_ordering_n3_switches_at_gamma0():
    scan = params.level_ordering_scan(3, 100)
    g0 = params.gamma_thresholds(3)["gamma0"]
    assert np.array_equal(scan["holds"], scan["gamma"] > g0)


@pytest.mark.parametrize("N", range(3, 11))
def test_f2_vanishes_at_one(N):
    assert abs(params.f2(1.0, N)) <= 1e-12


@pytest.mark.parametrize("N", [4, 5, 6])
def test_f1_at_split_positive(N):
    assert params.f1(math.sqrt((N - 1) / (2 * N)), N) > 0


def test_sufficiency_threshold():
    thr = params.f1_sufficiency_threshold()
    assert thr == pytest.approx(6.77, abs=5e-3)
    assert [params.f1_sufficiency_holds(N) for N in range(3, 10)] == [N > thr for N in range(3, 10)]


@pytest.mark.parametrize("N", range(3, 11))
def test_positivity_scan(N):
    rep = params.positivity_scan(N, 2000)
    assert rep.passed and rep.f1_min > 0
    if N >= 4:
        assert rep.f2_min > 0
    else:
        assert rep.f2_min is None


def test_positivity_scan_grid_floor():
    with pytest.raises(RangeError):
        params.positivity_scan(4, 999)


def test_constants_summary_keys(p4):
    d = params.constants_summary(p4)
    assert {"N", "gamma", "eps", "theta", "S", "S_gamma", "Lambda", "levels"} <= set(d)
