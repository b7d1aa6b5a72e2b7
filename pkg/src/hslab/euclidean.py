"""Quadratures in R^N: concentric bubble interactions and the far-translated Sobolev bubble.

Radial integrals are done in the variable ln r with composite Gauss-Legendre
panels, which resolves the two power laws r^{-beta_-} (near 0) and
r^{-beta_+} (near infinity) of the HS bubble at constant cost per decade.
Axisymmetric integrals add a polar angle, also with composite panels that
are graded toward the direction of the translated bubble.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, special

from .errors import RangeError
from .params import Params, hardy_sobolev_constant, sobolev_constant, sphere_area

GL_NODES = 32
LOG_R_SPAN = 40.0
PANEL = 0.25


@functools.lru_cache(maxsize=4)
def _gl(n: int = GL_NODES):
    return special.roots_legendre(n)


def _panels(breaks) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes and weights on consecutive intervals."""
    x0, w0 = _gl()
    b = np.asarray(breaks, dtype=float)
    a, c = b[:-1], b[1:]
    half = 0.5 * (c - a)
    x = half[:, None] * x0[None, :] + (0.5 * (a + c))[:, None]
    w = half[:, None] * w0[None, :]
    return x.ravel(), w.ravel()


def _log_r_rule(lo: float, hi: float, step: float = PANEL, extra=()):
    breaks = np.unique(np.concatenate([np.arange(lo, hi, step), [hi], np.asarray(extra, float)]))
    breaks = breaks[(breaks >= lo) & (breaks <= hi)]
    return _panels(breaks)


def _hs_shape(p: Params, r):
    """Unnormalized HS bubble 1 / (r^{2b+/(N-2)} + r^{2b-/(N-2)})^{(N-2)/2}."""
    e1 = 2.0 * p.beta_plus / (p.N - 2)
    e2 = 2.0 * p.beta_minus / (p.N - 2)
    lr = np.log(r)
    # log-sum-exp keeps the two power laws finite over many decades
    big = np.maximum(e1 * lr, e2 * lr)
    s = big + np.log(np.exp(e1 * lr - big) + np.exp(e2 * lr - big))
    return np.exp(-p.half * s)


@functools.lru_cache(maxsize=64)
def hs_constant(p: Params) -> float:
    """Amplitude making the HS bubble unit in L^{2*}(R^N)."""
    t, w = _log_r_rule(-LOG_R_SPAN, LOG_R_SPAN)
    r = np.exp(t)
    mass = sphere_area(p.N) * np.sum(w * _hs_shape(p, r) ** p.two_star * r**p.N)
    return float(mass ** (-1.0 / p.two_star))


def hs_profile(p: Params, r, lam: float = 1.0):
    """U_gamma[lam](r) = lam^{(N-2)/2} U_gamma(lam r), unit in L^{2*}."""
    return hs_constant(p) * lam**p.half * _hs_shape(p, lam * np.asarray(r, float))


def interaction_rn(p: Params, eta1: float, eta2: float, lam: float) -> float:
    """int_{R^N} U_gamma^{eta1} U_gamma[lam]^{eta2} dx with eta1 + eta2 = 2*."""
    if not (0.0 < lam <= 1.0):
        raise RangeError(f"dilation lambda must lie in (0, 1], got {lam!r}")
    if not (eta1 > 0 and eta2 > 0) or abs(eta1 + eta2 - p.two_star) > 1e-12:
        raise RangeError(f"exponents must be positive and sum to 2* = {p.two_star:g}")
    ll = math.log(lam)
    t, w = _log_r_rule(ll - LOG_R_SPAN, -ll + LOG_R_SPAN, extra=(0.0, -ll))
    r = np.exp(t)
    f = hs_profile(p, r) ** eta1 * hs_profile(p, r, lam) ** eta2 * r**p.N
    return float(sphere_area(p.N) * np.sum(w * f))


@dataclass(frozen=True)
class PowerFit:
    exponent: float
    intercept: float
    r2: float


def _fit(x, y) -> PowerFit:
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    A = np.vstack([x, np.ones_like(x)]).T
    (b, a), *_ = np.linalg.lstsq(A, y, rcond=None)
    ss_res = float(np.sum((y - b * x - a) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    return PowerFit(float(b), float(a), 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0)


def default_lambdas(n: int = 9) -> np.ndarray:
    return np.logspace(-1.0, -3.0, n)


def fit_rn_exponent(p: Params, eta1: float, eta2: float, lambdas=None) -> PowerFit:
    """Slope of ln I against ln lambda."""
    lambdas = default_lambdas() if lambdas is None else np.asarray(lambdas, float)
    vals = [interaction_rn(p, eta1, eta2, lam) for lam in lambdas]
    return _fit(np.log(lambdas), np.log(vals))


def fit_rn_balanced(p: Params, lambdas=None) -> PowerFit:
    """Affine fit of I(lambda) / lambda^{eps N/(N-2)} against ln(1/lambda)."""
    lambdas = default_lambdas() if lambdas is None else np.asarray(lambdas, float)
    e = p.two_star / 2.0
    vals = np.array([interaction_rn(p, e, e, lam) for lam in lambdas])
    return _fit(np.log(1.0 / lambdas), vals / lambdas ** (p.eps * p.N / (p.N - 2)))


# --- translated Sobolev bubble -------------------------------------------------------


@functools.lru_cache(maxsize=8)
def at_constant(N: int) -> float:
    """Amplitude making (1 + |x|^2)^{-(N-2)/2} unit in L^{2*}."""
    ts = 2.0 * N / (N - 2)
    t, w = _log_r_rule(-LOG_R_SPAN, LOG_R_SPAN)
    r = np.exp(t)
    mass = sphere_area(N) * np.sum(w * (1.0 + r * r) ** (-(N - 2) / 2.0 * ts) * r**N)
    return float(mass ** (-1.0 / ts))


def at_gradient_sq(N: int) -> float:
    """||grad U||_2^2 for the normalized Aubin-Talenti bubble; equals S."""
    t, w = _log_r_rule(-LOG_R_SPAN, LOG_R_SPAN)
    r = np.exp(t)
    du = at_constant(N) * (N - 2) * r * (1.0 + r * r) ** (-N / 2.0)
    return float(sphere_area(N) * np.sum(w * du * du * r**N))


def _angle_rule(z: float):
    """Panels in the polar angle, graded geometrically toward phi = 0."""
    lo = min(1e-5, 1e-2 / max(z, 1.0))
    breaks = np.concatenate([[0.0], np.pi * np.logspace(math.log10(lo / math.pi), 0.0, 30)])
    return _panels(breaks)


@dataclass(frozen=True)
class OffsetIntegrals:
    z: float
    hardy_term: float
    lambdas: np.ndarray = field(repr=False)
    overlap: np.ndarray = field(repr=False)
    m_value: float
    m_argmax: float
    lp_norm_sq: float
    escaped: bool


def _spherical_means(N: int, z: float, powers):
    """Radial nodes/weights and the sphere integrals of U[z]^k at radius r, for each k in powers."""
    lz = math.log(z)
    near = lz + np.array([-1.0, -0.5, -0.2, -0.1, -0.05, -0.02, -0.01, 0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0])
    t, w = _log_r_rule(-LOG_R_SPAN, LOG_R_SPAN, step=0.5, extra=near)
    r = np.exp(t)
    ph, wph = _angle_rule(z)
    wa = sphere_area(N - 1) * np.sin(ph) ** (N - 2) * wph
    d2 = r[:, None] ** 2 + z * z - 2.0 * r[:, None] * z * np.cos(ph)[None, :]
    base = at_constant(N) * (1.0 + d2) ** (-(N - 2) / 2.0)
    means = {k: (base**k) @ wa for k in powers}
    return t, w, r, means


def offset_bubble_integrals(p: Params, z: float, lambda_grid=None) -> OffsetIntegrals:
    """Hardy term, overlap with dilated HS bubbles, and L^{2*} norm of the bubble centred at z e_1."""
    if not z > 0:
        raise RangeError("offset z must be positive")
    N = p.N
    ts = p.two_star
    lambdas = np.logspace(-3.0, 3.0, 61) if lambda_grid is None else np.asarray(lambda_grid, float)
    t, w, r, M = _spherical_means(N, z, (1.0, 2.0, ts))
    hardy = float(np.sum(w * M[2.0] * r ** (N - 2)))
    lp2 = float(np.sum(w * M[ts] * r**N)) ** (2.0 / ts)

    def ov(ll):
        return float(np.sum(w * hs_profile(p, r, math.exp(ll)) ** (ts - 1.0) * M[1.0] * r**N))

    lls = np.log(lambdas)
    vals = np.array([ov(x) for x in lls])
    i = int(np.argmax(vals))
    escaped = i == 0 or i == vals.size - 1
    lo, hi = lls[max(i - 1, 0)], lls[min(i + 1, vals.size - 1)]
    res = optimize.minimize_scalar(lambda x: -ov(x), bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
    best = max(-res.fun, vals[i])
    arg = float(math.exp(res.x)) if -res.fun >= vals[i] else float(lambdas[i])
    return OffsetIntegrals(
        z=float(z),
        hardy_term=hardy,
        lambdas=lambdas,
        overlap=vals,
        m_value=float(best * best),
        m_argmax=arg,
        lp_norm_sq=lp2,
        escaped=bool(escaped),
    )


def hidden_level_quotient(p: Params, z: float) -> float:
    """Deficit over squared distance for the Aubin-Talenti bubble translated to distance z."""
    oi = offset_bubble_integrals(p, z)
    S = sobolev_constant(p.N)
    sg = hardy_sobolev_constant(p)
    e = S - p.gamma * oi.hardy_term
    return (e - sg) / (e - sg * oi.m_value)


def hidden_level_rows(p: Params, zs) -> list:
    """(z, hardy_term, m_value, quotient, target) for each offset."""
    target = 1.0 - hardy_sobolev_constant(p) / sobolev_constant(p.N)
    S = sobolev_constant(p.N)
    sg = hardy_sobolev_constant(p)
    rows = []
    for z in zs:
        oi = offset_bubble_integrals(p, z)
        e = S - p.gamma * oi.hardy_term
        rows.append((float(z), oi.hardy_term, oi.m_value, (e - sg) / (e - sg * oi.m_value), target))
    return rows
