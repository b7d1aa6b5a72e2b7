"""Two-bubble test fields and bubble-bubble interaction integrals on the cylinder.

For the sum v_s = U + U[s] of two far-apart bubbles the energy, the L^{2*}
norm and the distance to the manifold all expand in the overlap

    Q(s) = int U U[s]^{2*-1} = <U, U[s]>_eps / S_gamma,

which decays like exp(-eps |s|).  The reports here measure how well those
first-order expansions hold along a ladder of separations.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .cylinder import CylinderField, Grid, _quadratic, bubble_values, default_grid, hs_bubble, lp_norm, norm_eps_sq
from .errors import RangeError, UnderflowWarning
from .manifold import be_quotient, m_search
from .params import Params, hardy_sobolev_constant, two_peak_level

UNDERFLOW = 1e-14
LADDER = (8.0, 10.0, 12.0, 14.0, 16.0)


def default_ladder(p: Params) -> list:
    """Separations {8, 10, 12, 14, 16}/theta."""
    return [c / p.theta for c in LADDER]


def _overlap(p: Params, g: Grid, eta1: float, eta2: float, s: float) -> float:
    u1 = bubble_values(p, g, 0.0, eta1)
    u2 = bubble_values(p, g, s, eta2)
    return float(p.sphere_area * g.h * np.dot(u1, u2))


def interaction_pair(p: Params, g: Grid, s: float) -> tuple[float, float]:
    """Q(s) by direct quadrature, and the same number as <U, U[s]>_eps / S_gamma."""
    hs_bubble(p, g, s)  # tail check
    q = _overlap(p, g, 1.0, p.two_star - 1.0, s)
    u0 = bubble_values(p, g)
    us = bubble_values(p, g, s)
    qb = p.sphere_area * _quadratic(u0, us, g, p.eps**2) / hardy_sobolev_constant(p)
    if abs(q) < UNDERFLOW:
        warnings.warn(
            f"Q({s:g}) = {q:.3e} is below {UNDERFLOW:g}; exclude it from rate fits",
            UnderflowWarning,
            stacklevel=2,
        )
    return q, qb


def interaction_Q(p: Params, g: Grid, s: float) -> float:
    return interaction_pair(p, g, s)[0]


def interaction_general(p: Params, g: Grid, eta1: float, eta2: float, s: float) -> float:
    """int U^{eta1} U[s]^{eta2} with eta1 + eta2 = 2*."""
    if not (eta1 > 0 and eta2 > 0):
        raise RangeError("interaction exponents must be positive")
    if abs(eta1 + eta2 - p.two_star) > 1e-12:
        raise RangeError(f"exponents must sum to 2* = {p.two_star:g}, got {eta1 + eta2:g}")
    hs_bubble(p, g, s)
    return _overlap(p, g, eta1, eta2, s)


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    r2: float


def _linfit(x, y) -> RateFit:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    A = np.vstack([x, np.ones_like(x)]).T
    (b, a), *_ = np.linalg.lstsq(A, y, rcond=None)
    ss_res = float(np.sum((y - (b * x + a)) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    return RateFit(float(b), float(a), 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0)


def fit_rate(s_values, values) -> RateFit:
    """Least squares for ln I = slope * s + c."""
    return _linfit(s_values, np.log(values))


def fit_log_corrected(s_values, values) -> RateFit:
    """Least squares for ln(I/s) = slope * s + c."""
    s = np.asarray(s_values, dtype=float)
    return _linfit(s, np.log(np.asarray(values) / s))


def fit_balanced_profile(p: Params, s_values, values) -> RateFit:
    """Affine fit of I(s) exp(s eps N/(N-2)) against s; slope > 0 and R^2 near 1 mean I ~ a s e^{-b s}."""
    s = np.asarray(s_values, dtype=float)
    b = p.eps * p.N / (p.N - 2)
    return _linfit(s, np.asarray(values) * np.exp(b * s))


def interaction_rates(p: Params, splits, s_values=None, g: Grid | None = None) -> dict:
    """Fitted exponents of int U^{eta1} U[s]^{eta2} over a separation ladder."""
    s_values = list(s_values or default_ladder(p))
    g = g or default_grid(p, shift=max(s_values))
    out = {}
    for eta1, eta2 in splits:
        vals = [interaction_general(p, g, eta1, eta2, s) for s in s_values]
        entry = {"s": s_values, "values": vals, "fit": fit_rate(s_values, vals)}
        if abs(eta1 - eta2) < 1e-12:
            entry["log_corrected"] = fit_log_corrected(s_values, vals)
            entry["balanced_profile"] = fit_balanced_profile(p, s_values, vals)
            entry["predicted_slope"] = -p.eps * p.N / (p.N - 2)
        else:
            entry["predicted_slope"] = -p.eps * min(eta1, eta2)
        out[(eta1, eta2)] = entry
    return out


@dataclass(frozen=True)
class TwoPeakReport:
    s: float
    Q: float
    Q_bilinear: float
    resid_a: float
    resid_b_over_Q: float
    resid_c_over_Q: float
    quotient: float
    norm2_coeff: float
    power_coeff: float
    m_resid_over_Q: float
    dist2: float


def two_peak_field(p: Params, g: Grid, s: float) -> CylinderField:
    return hs_bubble(p, g, 0.0) + hs_bubble(p, g, s)


def two_peak_report(p: Params, g: Grid | None, s_list) -> list:
    """Expansion residuals for v_s = U + U[s] along the ladder s_list."""
    s_list = list(s_list)
    g = g or default_grid(p, shift=max(abs(s) for s in s_list))
    sg = hardy_sobolev_constant(p)
    ts = p.two_star
    c = 2.0 ** (2.0 / ts)
    out = []
    for s in s_list:
        q, qb = interaction_pair(p, g, s)
        v = two_peak_field(p, g, s)
        norm2 = norm_eps_sq(v)
        lp = lp_norm(v, ts)
        lp2 = lp * lp
        rep = be_quotient(v)
        m = m_search(v).value
        out.append(
            TwoPeakReport(
                s=float(s),
                Q=q,
                Q_bilinear=qb,
                resid_a=norm2 - 2.0 * sg * (1.0 + q),
                resid_b_over_Q=(lp2 - c - 2.0 * c * q) / q,
                resid_c_over_Q=(rep.dist2 - sg) / q,
                quotient=rep.quotient,
                norm2_coeff=(lp2 - c) / q,
                power_coeff=(lp**ts - 2.0) / q,
                m_resid_over_Q=(math.sqrt(m) - 1.0 - q) / q,
                dist2=rep.dist2,
            )
        )
    return out


def two_peak_rows(reports) -> tuple:
    header = ("s", "Q", "resid_a", "resid_b_over_Q", "resid_c_over_Q", "quotient")
    rows = [(r.s, r.Q, r.resid_a, r.resid_b_over_Q, r.resid_c_over_Q, r.quotient) for r in reports]
    return header, rows


def level_gap(p: Params, reports) -> list:
    """(2 - 2^{2/2*}) - quotient for each report."""
    lv = two_peak_level(p.N)
    return [lv - r.quotient for r in reports]
