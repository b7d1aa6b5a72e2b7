"""Closed-form constants of the Hardy-Sobolev problem.

Everything here is a pure function of the dimension ``N`` and the Hardy
parameter ``gamma``.  The spectral-gap formula, the threshold values of
``gamma`` and the positivity scans behind the ordering of the critical
levels all live in this module.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .errors import MissingRadialConstantError, RangeError


@dataclass(frozen=True)
class Params:
    N: int
    gamma: float
    eps: float
    theta: float
    beta_minus: float
    beta_plus: float
    two_star: float
    a: float
    q: float

    @property
    def gamma_max(self) -> float:
        return (self.N - 2) ** 2 / 4.0

    @property
    def half(self) -> float:
        """(N-2)/2, the sech exponent of the bubble profile."""
        return (self.N - 2) / 2.0

    @property
    def sphere_area(self) -> float:
        return sphere_area(self.N)


def sphere_area(N: int) -> float:
    """Surface measure of the unit sphere S^{N-1} in R^N."""
    return 2.0 * math.pi ** (N / 2.0) / math.gamma(N / 2.0)


def _check_dimension(N) -> int:
    if int(N) != N or N < 3:
        raise RangeError(f"dimension N must be an integer >= 3, got {N!r}")
    return int(N)


def make_params(N: int, gamma: float) -> Params:
    N = _check_dimension(N)
    gmax = (N - 2) ** 2 / 4.0
    if not (0.0 < gamma < gmax):
        raise RangeError(
            f"gamma must lie in the open interval (0, {gmax:g}) for N={N}, got {gamma!r}"
        )
    gamma = float(gamma)
    half = (N - 2) / 2.0
    eps = math.sqrt(gmax - gamma)
    return Params(
        N=N,
        gamma=gamma,
        eps=eps,
        theta=eps / half,
        beta_minus=half - eps,
        beta_plus=half + eps,
        two_star=2.0 * N / (N - 2),
        # smaller root of a(N-2-a) = gamma
        a=half - eps,
        q=(N - 1) / eps**2,
    )


def sech_power_integral(N: int) -> float:
    """Integral of sech(t)**N over the real line, by adaptive quadrature.

    The range is cut at |t| = 60, where the integrand is below 1e-52.
    """
    val, _ = integrate.quad(
        lambda t: (1.0 / math.cosh(t)) ** N, 0.0, 60.0, epsabs=0.0, epsrel=1e-13, limit=200
    )
    return 2.0 * val


def sech_power_integral_closed_form(N: int) -> float:
    return math.sqrt(math.pi) * math.gamma(N / 2.0) / math.gamma((N + 1) / 2.0)


def ode_constant(N: int, alpha: float = 1.0) -> float:
    """Coefficient C_alpha of the nonlinearity in the ODE solved by sech^{(N-2)/2}(alpha t)."""
    half = (N - 2) / 2.0
    return (half**2 + half) * alpha**2


@functools.lru_cache(maxsize=None)
def sobolev_constant(N: int) -> float:
    """Sharp Sobolev constant, assembled from the cylinder profile sech^{(N-2)/2}."""
    N = _check_dimension(N)
    ts = 2.0 * N / (N - 2)
    return (
        sphere_area(N) ** (1.0 - 2.0 / ts)
        * ode_constant(N)
        * sech_power_integral(N) ** ((ts - 2.0) / ts)
    )


def sobolev_constant_closed_form(N: int) -> float:
    N = _check_dimension(N)
    return math.pi * N * (N - 2) * (math.gamma(N / 2.0) / math.gamma(N)) ** (2.0 / N)


def hardy_sobolev_constant(p: Params) -> float:
    return p.theta ** (1.0 + 2.0 / p.two_star) * sobolev_constant(p.N)


def gamma_c_star(N: int) -> float:
    N = _check_dimension(N)
    return (N + 1) / (2.0 * N) * ((N - 2) / 2.0) ** 2


def _lambda_q_branch(N: int, eps: float) -> float:
    ts = 2.0 * N / (N - 2)
    q = (N - 1) / eps**2
    den = 2.0 + 2.0 * q + (ts - 2.0) * math.sqrt(1.0 + q)
    return (den - ts * (ts - 1.0)) / den


def _lambda_of_gamma(N: int, gamma: float) -> float:
    if gamma > gamma_c_star(N):
        return 4.0 / (N + 4)
    return _lambda_q_branch(N, math.sqrt((N - 2) ** 2 / 4.0 - gamma))


def spectral_gap_formula(p: Params) -> float:
    """Closed-form local level Lambda(gamma) = 1 - mu_2/mu_3."""
    return _lambda_of_gamma(p.N, p.gamma)


@dataclass(frozen=True)
class Gamma0Solve:
    gamma0: float
    residual: float
    clamped: bool


def solve_gamma0(N: int, c_rad: float) -> Gamma0Solve:
    """Root of Lambda(gamma) = c_rad on the increasing branch (0, gamma_c*].

    Lambda(0+) = 0 and Lambda(gamma_c*) = 4/(N+4); values outside that
    range are clamped to the nearest endpoint and flagged.
    """
    gcs = gamma_c_star(N)
    top = 4.0 / (N + 4)
    if c_rad >= top:
        return Gamma0Solve(gcs, _lambda_of_gamma(N, gcs) - c_rad, c_rad > top)
    if c_rad <= 0.0:
        return Gamma0Solve(0.0, -c_rad, True)
    root = optimize.brentq(
        lambda g: _lambda_of_gamma(N, g) - c_rad,
        0.0,
        gcs,
        xtol=1e-15,
        rtol=4.0 * np.finfo(float).eps,
        maxiter=500,
    )
    return Gamma0Solve(root, _lambda_of_gamma(N, root) - c_rad, False)


def gamma_thresholds(N: int, c_rad: float | None = None) -> dict:
    N = _check_dimension(N)
    gcs = gamma_c_star(N)
    if N == 3:
        g0 = (1.0 - (N / (N + 4.0)) ** (N / (N - 1.0))) * (N - 2) ** 2 / 4.0
        return {"gamma_c_star": gcs, "gamma0": g0, "clamped": False, "residual": None}
    if c_rad is None:
        raise MissingRadialConstantError(
            f"gamma_0 for N={N} requires radial constant estimate c_rad"
        )
    sol = solve_gamma0(N, c_rad)
    return {
        "gamma_c_star": gcs,
        "gamma0": sol.gamma0,
        "clamped": sol.clamped,
        "residual": sol.residual,
    }


@dataclass(frozen=True)
class CriticalLevels:
    local: float
    two_peak: float
    hidden: float

    @property
    def local_below_hidden(self) -> bool:
        return self.local < self.hidden

    @property
    def local_below_two_peak(self) -> bool:
        return self.local < self.two_peak

    def as_dict(self) -> dict:
        return {
            "local": self.local,
            "two_peak": self.two_peak,
            "hidden": self.hidden,
            "local_below_hidden": self.local_below_hidden,
            "local_below_two_peak": self.local_below_two_peak,
        }


def two_peak_level(N: int) -> float:
    ts = 2.0 * N / (N - 2)
    return 2.0 - 2.0 ** (2.0 / ts)


def critical_levels(p: Params) -> CriticalLevels:
    return CriticalLevels(
        local=spectral_gap_formula(p),
        two_peak=two_peak_level(p.N),
        hidden=1.0 - p.theta ** (1.0 + 2.0 / p.two_star),
    )


def level_ordering_scan(N: int, n_points: int = 100) -> dict:
    """Lambda(gamma) vs. 1 - S_gamma/S on an interior gamma-grid."""
    gmax = (N - 2) ** 2 / 4.0
    gammas = np.linspace(0.0, gmax, n_points + 2)[1:-1]
    local = np.empty(n_points)
    hidden = np.empty(n_points)
    for i, g in enumerate(gammas):
        lv = critical_levels(make_params(N, g))
        local[i], hidden[i] = lv.local, lv.hidden
    return {"gamma": gammas, "local": local, "hidden": hidden, "holds": local < hidden}


def f1(theta, N: int):
    return N / (N + 4.0) - np.asarray(theta, dtype=float) ** (2.0 * (N - 1) / N)


def f2(theta, N: int):
    th = np.asarray(theta, dtype=float)
    c = 4.0 * (N - 1) / (N - 2) ** 2
    return N * (N + 2.0) / (N - 2) ** 2 * th ** (2.0 / N) - (
        th**2 + c + 2.0 * th / (N - 2) * np.sqrt(th**2 + c)
    )


def f1_sufficiency_threshold() -> float:
    """Dimension above which ln(5-4x) < 4(1-x) and x ln x < 0 already force f1 > 0."""
    return (4.0 + math.log(2.0)) / math.log(2.0)


def f1_sufficiency_holds(N: int) -> bool:
    """The linearized bound 4 - (4 + ln 2) x < 0 with x = 1 - 1/N."""
    x = 1.0 - 1.0 / N
    return 4.0 - (4.0 + math.log(2.0)) * x < 0.0


@dataclass(frozen=True)
class PositivityReport:
    N: int
    theta_split: float
    f1_min: float
    f1_argmin: float
    f2_min: float | None
    f2_argmin: float | None
    f1_at_split: float
    f2_at_one: float
    passed: bool


def positivity_scan(N: int, grid_size: int = 2000) -> PositivityReport:
    """Grid scan of f1 and f2 over the ranges where they must stay positive.

    For N >= 4, f1 on (0, sqrt((N-1)/2N)) and f2 on [sqrt((N-1)/2N), 1).
    For N = 3 only f1 is scanned, on (0, (N/(N+4))^{N/(2(N-1))}).
    """
    N = _check_dimension(N)
    if grid_size < 1000:
        raise RangeError("positivity scans need at least 1000 grid points")
    split = math.sqrt((N - 1) / (2.0 * N))
    top = split if N >= 4 else (N / (N + 4.0)) ** (N / (2.0 * (N - 1)))
    th1 = np.linspace(0.0, top, grid_size + 2)[1:-1]
    v1 = f1(th1, N)
    i1 = int(np.argmin(v1))
    f2_min = f2_arg = None
    ok = bool(v1[i1] > 0)
    if N >= 4:
        th2 = np.linspace(split, 1.0, grid_size + 1)[:-1]
        v2 = f2(th2, N)
        i2 = int(np.argmin(v2))
        f2_min, f2_arg = float(v2[i2]), float(th2[i2])
        ok = ok and f2_min > 0
    return PositivityReport(
        N=N,
        theta_split=split,
        f1_min=float(v1[i1]),
        f1_argmin=float(th1[i1]),
        f2_min=f2_min,
        f2_argmin=f2_arg,
        f1_at_split=float(f1(split, N)),
        f2_at_one=float(f2(1.0, N)),
        passed=ok,
    )


def constants_summary(p: Params) -> dict:
    S = sobolev_constant(p.N)
    levels = critical_levels(p)
    return {
        "N": p.N,
        "gamma": p.gamma,
        "eps": p.eps,
        "theta": p.theta,
        "beta_minus": p.beta_minus,
        "beta_plus": p.beta_plus,
        "two_star": p.two_star,
        "a": p.a,
        "q": p.q,
        "S": S,
        "S_gamma": hardy_sobolev_constant(p),
        "Lambda": levels.local,
        "gamma_c_star": gamma_c_star(p.N),
        "levels": levels.as_dict(),
    }
