"""Descent on the radial deficit/distance quotient, and the gamma_0 solve.

The quotient J(f) = delta(f) / dist^2(f) is minimized over t-even sector-0
profiles.  The gradient is taken in the eps-inner product (a Sobolev
gradient, obtained by one spectral solve), with the distance term
differentiated at the optimal translation and amplitude.  On even profiles
the optimal translations come in pairs +-s*, so the envelope term uses the
symmetrized bubble (U[s*] + U[-s*]) / 2, which keeps iterates even and
makes the derivative well defined at the tie.

Everything returned is an upper bound for the radial constant: a local
descent cannot certify the infimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cylinder import (
    CylinderField,
    Grid,
    _quadratic,
    bubble_values,
    norm_eps_sq,
    resample_scale,
    solve_operator,
)
from .errors import ConvergenceError, DegenerateQuotientError, RangeError, TailTruncationError
from .manifold import DEGENERATE_TOL, m_search, quotient_value
from .params import Params, hardy_sobolev_constant, solve_gamma0, spectral_gap_formula
from .spectrum import sector_eigpairs


@dataclass(frozen=True)
class MinimizeOptions:
    max_iter: int = 5000
    rtol: float = 1e-8
    min_iter: int = 10
    armijo: float = 1e-4
    tau0: float = 1.0
    min_tau: float = 1e-12
    max_restarts: int = 3
    restart_amplitude: float = 0.2


@dataclass(frozen=True)
class MinimizeResult:
    c_rad_estimate: float
    minimizer: CylinderField = field(repr=False)
    iterations: int
    converged: bool
    history: list = field(repr=False)
    restarts: int = 0
    argmax: float = 0.0


class _Quotient:
    """Quotient and the pieces its gradient needs, for sector-0 samples on a fixed grid."""

    def __init__(self, p: Params, g: Grid):
        self.p, self.g = p, g
        self.sg = hardy_sobolev_constant(p)
        self.e2 = p.eps**2
        self.w = p.sphere_area * g.h

    def field(self, v: np.ndarray) -> CylinderField:
        return CylinderField.radial(self.p, self.g, v)

    def evaluate(self, v: np.ndarray):
        ts = self.p.two_star
        norm2 = self.p.sphere_area * _quadratic(v, v, self.g, self.e2)
        lp2 = (self.w * np.sum(np.abs(v) ** ts)) ** (2.0 / ts)
        m = m_search(self.field(v))
        dist2 = norm2 - self.sg * m.value
        if not dist2 > DEGENERATE_TOL * norm2:
            raise DegenerateQuotientError("iterate collapsed onto the extremizer manifold")
        q = (norm2 - self.sg * lp2) / dist2
        return q, dict(norm2=norm2, lp2=lp2, dist2=dist2, s=m.s, c=m.overlap)

    def gradient(self, v: np.ndarray, q: float, info: dict) -> np.ndarray:
        """Riesz representative (in the eps-product) of dJ, up to the factor |S^{N-1}|."""
        p, g = self.p, self.g
        ts = p.two_star
        d = info["dist2"]
        nl = solve_operator(np.abs(v) ** (ts - 2.0) * v, g, self.e2)
        grad_delta = v - self.sg * info["lp2"] ** (1.0 - ts / 2.0) * nl
        s, c = info["s"], info["c"]
        sym = 0.5 * (bubble_values(p, g, s) + bubble_values(p, g, -s))
        grad_dist = v - c * sym
        return (2.0 / d) * (grad_delta - q * grad_dist)


def third_radial_direction(p: Params, g: Grid) -> np.ndarray:
    """Third sector-0 eigenfunction of the linearized problem, scaled to the bubble's eps-norm."""
    _, vecs = sector_eigpairs(p, g, 0, 3)
    rho = vecs[:, 2]
    u = bubble_values(p, g)
    scale = math.sqrt(_quadratic(u, u, g, p.eps**2) / _quadratic(rho, rho, g, p.eps**2))
    return rho * scale


def default_init(p: Params, g: Grid, amplitude: float = 0.2) -> CylinderField:
    """U + amplitude * rho_3, with the sign of rho_3 that gives the lower quotient."""
    u = bubble_values(p, g)
    rho = third_radial_direction(p, g)
    cands = [CylinderField.radial(p, g, u + sgn * amplitude * rho) for sgn in (1.0, -1.0)]
    vals = [quotient_value(f) for f in cands]
    return cands[int(np.argmin(vals))]


def _even_part(v: np.ndarray) -> np.ndarray:
    return 0.5 * (v + v[::-1])


def _normalize(v: np.ndarray, p: Params, g: Grid) -> np.ndarray:
    ts = p.two_star
    return v / (p.sphere_area * g.h * np.sum(np.abs(v) ** ts)) ** (1.0 / ts)


def minimize_radial_quotient(
    p: Params, g: Grid, init: CylinderField | None = None, opts: MinimizeOptions | None = None
) -> MinimizeResult:
    """Backtracking Sobolev-gradient descent of the quotient over even sector-0 profiles.

    The seed is replaced by its even part.  If an iterate collapses onto
    the manifold, the descent restarts from the bubble plus a larger
    multiple of the third radial eigenfunction.
    """
    opts = opts or MinimizeOptions()
    if init is None:
        init = default_init(p, g)
    if init.params != p or init.grid != g:
        raise RangeError("initial field must live on the given parameters and grid")
    if not init.is_radial:
        raise RangeError("radial minimization needs a sector-0 initial field")
    J = _Quotient(p, g)
    v = _normalize(_even_part(init.sector(0)), p, g)
    restarts = 0
    while True:
        try:
            return _descend(J, v, opts, restarts)
        except DegenerateQuotientError:
            restarts += 1
            if restarts > opts.max_restarts:
                raise ConvergenceError(
                    f"descent collapsed onto the manifold after {opts.max_restarts} restarts"
                ) from None
            rho = third_radial_direction(p, g)
            amp = opts.restart_amplitude * (restarts + 1)
            v = _normalize(bubble_values(p, g) + amp * rho, p, g)


def _descend(J: _Quotient, v: np.ndarray, opts: MinimizeOptions, restarts: int) -> MinimizeResult:
    p, g = J.p, J.g
    q, info = J.evaluate(v)
    history = [(0, q)]
    tau = opts.tau0
    converged = False
    it = 0
    for it in range(1, opts.max_iter + 1):
        G = J.gradient(v, q, info)
        gn = _quadratic(G, G, g, J.e2)
        if gn == 0.0:
            converged = True
            break
        while True:
            # project out the odd part that rounding in the spectral solve lets creep in
            cand = _normalize(_even_part(v - tau * G), p, g)
            try:
                qn, info_n = J.evaluate(cand)
            except TailTruncationError:
                # an overlong step pushed mass to the grid edge; treat it as rejected
                qn = math.inf
            if qn <= q - opts.armijo * tau * gn:
                break
            tau *= 0.5
            if tau < opts.min_tau:
                break
        if tau < opts.min_tau:
            # no admissible step: the gradient is at rounding level
            converged = True
            break
        rel = (q - qn) / abs(q)
        v, q, info = cand, qn, info_n
        history.append((it, q))
        tau *= 2.0
        if rel < opts.rtol and it >= opts.min_iter:
            converged = True
            break
    return MinimizeResult(
        c_rad_estimate=q,
        minimizer=CylinderField.radial(p, g, v),
        iterations=it,
        converged=converged,
        history=history,
        restarts=restarts,
        argmax=info["s"],
    )


def transported_quotient(result: MinimizeResult, p2: Params) -> float:
    """Quotient of the minimizer carried to parameters p2 by the theta-rescaling."""
    f = resample_scale(result.minimizer, result.minimizer.params, p2)
    return quotient_value(f)


def bound_check(p: Params, c_rad: float) -> dict:
    from .params import two_peak_level

    lam = spectral_gap_formula(p)
    tp = two_peak_level(p.N)
    return {"Lambda": lam, "two_peak": tp, "below": bool(c_rad < min(lam, tp))}


def gamma0_from_estimate(N: int, c_rad: float) -> dict:
    """Root of Lambda(gamma) = c_rad on (0, gamma_c*], with an out-of-range flag when clamped."""
    if N < 4:
        raise RangeError("for N = 3 gamma_0 has a closed form; use params.gamma_thresholds")
    sol = solve_gamma0(N, c_rad)
    return {"gamma0": sol.gamma0, "residual": sol.residual, "clamped": sol.clamped}


def scale_invariance_gap(f: CylinderField, c: float = 3.7) -> float:
    """|J(c f) - J(f)|, which should sit at rounding level."""
    return abs(quotient_value(f * c) - quotient_value(f))


def energy(f: CylinderField) -> float:
    return norm_eps_sq(f)
