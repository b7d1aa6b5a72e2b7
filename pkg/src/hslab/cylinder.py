"""Functions on the cylinder R x S^{N-1}, stored sector by sector.

A field is a finite sum ``u(t, sigma) = sum_k f_k(t) Z_k(sigma)`` over
axisymmetric spherical harmonics.  ``Z_k`` is the zonal harmonic of degree
``k`` scaled so that ``||Z_k||^2_{L^2(S^{N-1})} = |S^{N-1}|``; with this
choice a profile stands for its degree-``k`` content spread evenly over the
``D(k)`` copies, and every sector enters the quadratic forms with unit
weight.  Profiles are sampled on a uniform grid symmetric about ``t = 0``.

The quadratic form ``||u||_eps^2`` is evaluated spectrally (FFT), which is
exact for trapezoid-sampled, exponentially decaying profiles up to
rounding.  This keeps identities such as ``||U||_eps^2 = S_gamma`` at
machine precision rather than at the O(h^2) level of finite differences.
"""

from __future__ import annotations

import functools
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special
from scipy.interpolate import CubicSpline

from .errors import GridMismatchError, RangeError, TailTruncationError
from .params import Params, make_params, ode_constant, sphere_area

TAIL_TOL = 1e-12
DECAY_TOL = 1e-10
ANGLE_NODES = 64


def harmonic_dim(N: int, k: int) -> int:
    """Dimension of degree-k spherical harmonics on S^{N-1}."""
    if k < 0:
        raise RangeError("harmonic degree must be >= 0")
    if k == 0:
        return 1
    if k == 1:
        return N
    return math.comb(N + k - 1, k) - math.comb(N + k - 3, k - 2)


def angular_eigenvalue(N: int, k: int) -> float:
    return float(k * (k + N - 2))


@dataclass(frozen=True)
class Grid:
    L: float
    n: int

    def __post_init__(self):
        if self.n < 3 or self.n % 2 == 0:
            raise RangeError(f"grid point count must be odd and >= 3, got {self.n}")
        if not self.L > 0:
            raise RangeError(f"grid half width must be positive, got {self.L}")

    @property
    def h(self) -> float:
        return 2.0 * self.L / (self.n - 1)

    @property
    def index(self) -> np.ndarray:
        """Signed node index, zero at t = 0."""
        return np.arange(self.n, dtype=float) - (self.n - 1) // 2

    @functools.cached_property
    def t(self) -> np.ndarray:
        t = self.index * self.h
        t.flags.writeable = False
        return t

    @functools.cached_property
    def xi(self) -> np.ndarray:
        xi = 2.0 * np.pi * np.fft.fftfreq(self.n, self.h)
        xi.flags.writeable = False
        return xi

    def shifted_nodes(self, s: float) -> np.ndarray:
        """Nodes t_i + s, computed so that grid-multiple shifts land exactly on nodes."""
        return (self.index + s / self.h) * self.h


def bubble_half_width(p: Params, tol: float = TAIL_TOL) -> float:
    """Smallest L with sech^{(N-2)/2}(theta L) < tol."""
    y = tol ** (1.0 / p.half)
    return math.acosh(1.0 / y) / p.theta


def default_grid(p: Params, shift: float = 0.0, n: int | None = None) -> Grid:
    """Default grid, widened by ``|shift|`` at constant spacing.

    The base half width is max(40, 30/theta), raised further when needed so
    that the bubble tail drops below 1e-12 at the boundary (this matters for
    N = 3, where the profile decays like sech^{1/2}).
    """
    base = max(40.0, 30.0 / p.theta, 1.01 * bubble_half_width(p))
    L = base + abs(shift)
    if n is None:
        h0 = 2.0 * base / 4000
        n = int(math.ceil(2.0 * L / h0)) + 1
        n += 1 - n % 2
    return Grid(L, n)


@dataclass(frozen=True)
class SectorProfile:
    k: int
    values: np.ndarray = field(repr=False)
    multiplicity: int = 1

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        peak = np.max(np.abs(vals)) if vals.size else 0.0
        edge = max(abs(vals[0]), abs(vals[-1]))
        if peak > 0 and edge > DECAY_TOL * peak:
            raise TailTruncationError(
                f"sector {self.k} profile does not decay at the grid edge "
                f"(|f(+-L)|/max|f| = {edge / peak:.3e})"
            )


@dataclass(frozen=True)
class CylinderField:
    params: Params
    grid: Grid
    sectors: tuple

    def __post_init__(self):
        ks = [s.k for s in self.sectors]
        if len(set(ks)) != len(ks):
            raise RangeError("duplicate sector degrees in field")
        for s in self.sectors:
            if s.values.shape != (self.grid.n,):
                raise GridMismatchError("profile length does not match the grid")
        object.__setattr__(self, "sectors", tuple(sorted(self.sectors, key=lambda s: s.k)))

    @classmethod
    def radial(cls, p: Params, g: Grid, values) -> "CylinderField":
        return cls(p, g, (SectorProfile(0, values, 1),))

    @classmethod
    def from_sectors(cls, p: Params, g: Grid, profiles: dict) -> "CylinderField":
        return cls(
            p,
            g,
            tuple(SectorProfile(k, v, harmonic_dim(p.N, k)) for k, v in profiles.items()),
        )

    @property
    def degrees(self) -> tuple:
        return tuple(s.k for s in self.sectors)

    @property
    def is_radial(self) -> bool:
        return all(s.k == 0 or not np.any(s.values) for s in self.sectors)

    def sector(self, k: int) -> np.ndarray:
        for s in self.sectors:
            if s.k == k:
                return s.values
        return np.zeros(self.grid.n)

    def _combine(self, other: "CylinderField", sign: float) -> "CylinderField":
        _check_compatible(self, other)
        ks = sorted(set(self.degrees) | set(other.degrees))
        return CylinderField.from_sectors(
            self.params, self.grid, {k: self.sector(k) + sign * other.sector(k) for k in ks}
        )

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __mul__(self, c):
        return CylinderField(
            self.params,
            self.grid,
            tuple(SectorProfile(s.k, c * s.values, s.multiplicity) for s in self.sectors),
        )

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def restrict(self, degrees) -> "CylinderField":
        keep = tuple(s for s in self.sectors if s.k in set(degrees))
        return CylinderField(self.params, self.grid, keep)


def _check_compatible(f: CylinderField, g: CylinderField):
    if f.grid != g.grid:
        raise GridMismatchError(f"fields live on different grids: {f.grid} vs {g.grid}")
    if f.params != g.params:
        raise GridMismatchError("fields carry different parameters")


@functools.lru_cache(maxsize=64)
def bubble_constant(p: Params, g: Grid) -> float:
    """Amplitude making c*sech^{(N-2)/2}(theta t) unit in discrete L^{2*}."""
    mass = p.sphere_area * g.h * np.sum(np.cosh(p.theta * g.t) ** (-float(p.N)))
    return float(mass ** (-1.0 / p.two_star))


def bubble_values(p: Params, g: Grid, s: float = 0.0, power: float = 1.0) -> np.ndarray:
    """Samples of U[s]^power where U[s](t) = U(t + s) is the unit HS bubble."""
    c = bubble_constant(p, g)
    return c**power * np.cosh(p.theta * g.shifted_nodes(s)) ** (-p.half * power)


def hs_bubble(p: Params, g: Grid, s: float = 0.0) -> CylinderField:
    need = abs(s) + bubble_half_width(p)
    if g.L < need:
        raise TailTruncationError(
            f"tail truncation: bubble shifted by {s:g} needs half width L >= {need:.4g}, "
            f"grid has L = {g.L:g}",
            required_half_width=need,
        )
    return CylinderField.radial(p, g, bubble_values(p, g, s))


def _quadratic(f: np.ndarray, g: np.ndarray, grid: Grid, mass: float) -> float:
    F = np.fft.fft(f)
    G = F if g is f else np.fft.fft(g)
    sym = grid.xi**2 + mass
    return float(grid.h * np.sum(sym * (F.real * G.real + F.imag * G.imag)) / grid.n)


def apply_operator(values: np.ndarray, grid: Grid, mass: float) -> np.ndarray:
    """(-d^2/dt^2 + mass) applied spectrally."""
    return np.fft.ifft((grid.xi**2 + mass) * np.fft.fft(values)).real


def solve_operator(values: np.ndarray, grid: Grid, mass: float) -> np.ndarray:
    """Inverse of apply_operator."""
    return np.fft.ifft(np.fft.fft(values) / (grid.xi**2 + mass)).real


def norm_eps_sq(f: CylinderField, eps: float | None = None) -> float:
    e2 = f.params.eps**2 if eps is None else eps**2
    N = f.params.N
    total = 0.0
    for s in f.sectors:
        total += _quadratic(s.values, s.values, f.grid, angular_eigenvalue(N, s.k) + e2)
    return f.params.sphere_area * total


def norm_eps(f: CylinderField, eps: float | None = None) -> float:
    return math.sqrt(norm_eps_sq(f, eps))


def inner_eps(f: CylinderField, g: CylinderField, eps: float | None = None) -> float:
    _check_compatible(f, g)
    e2 = f.params.eps**2 if eps is None else eps**2
    N = f.params.N
    total = 0.0
    for k in sorted(set(f.degrees) & set(g.degrees)):
        total += _quadratic(f.sector(k), g.sector(k), f.grid, angular_eigenvalue(N, k) + e2)
    return f.params.sphere_area * total


@functools.lru_cache(maxsize=16)
def _angle_rule(N: int, nodes: int = ANGLE_NODES):
    alpha = (N - 3) / 2.0
    x, w = special.roots_jacobi(nodes, alpha, alpha)
    return x, w * sphere_area(N - 1)


def zonal_harmonic(N: int, k: int, x) -> np.ndarray:
    """Degree-k zonal harmonic at cos(polar angle) = x, unit mean square on the sphere."""
    lam = (N - 2) / 2.0
    x = np.asarray(x, dtype=float)
    return math.sqrt(harmonic_dim(N, k)) * special.eval_gegenbauer(k, lam, x) / special.eval_gegenbauer(k, lam, 1.0)


def lp_norm(f: CylinderField, p: float) -> float:
    N = f.params.N
    nonzero = [s for s in f.sectors if np.any(s.values)]
    if all(s.k == 0 for s in nonzero):
        v = f.sector(0)
        return float((f.params.sphere_area * f.grid.h * np.sum(np.abs(v) ** p)) ** (1.0 / p))
    x, w = _angle_rule(N)
    u = np.zeros((f.grid.n, x.size))
    for s in nonzero:
        u += np.outer(s.values, zonal_harmonic(N, s.k, x))
    return float((f.grid.h * np.sum(np.abs(u) ** p @ w)) ** (1.0 / p))


def ode_residual(alpha: float, N: int, g: Grid) -> float:
    """Max residual of -h'' + ((N-2)/2)^2 alpha^2 h - C_alpha h^{2*-1} for h = sech^{(N-2)/2}(alpha t)."""
    if not alpha > 0:
        raise RangeError("alpha must be positive")
    a = (N - 2) / 2.0
    ts = 2.0 * N / (N - 2)
    x = alpha * g.t
    sech = 1.0 / np.cosh(x)
    tanh = np.tanh(x)
    h = sech**a
    h2 = a**2 * alpha**2 * h * tanh**2 - a * alpha**2 * h * sech**2
    res = -h2 + a**2 * alpha**2 * h - ode_constant(N, alpha) * h ** (ts - 1.0)
    return float(np.max(np.abs(res)))


def resample_scale(
    f: CylinderField, p1: Params, p2: Params, grid: Grid | None = None
) -> CylinderField:
    """Transport a radial field from parameters p1 to p2 by t -> f((theta2/theta1) t).

    Without ``grid`` the result lives on the grid whose nodes are the old
    nodes divided by theta2/theta1, so values carry over unchanged.  With an
    explicit ``grid`` the profile is evaluated by cubic interpolation.
    """
    if not f.is_radial:
        raise RangeError("resample_scale requires a sector-0 (sigma-independent) field")
    if f.params != p1:
        raise GridMismatchError("field parameters do not match p1")
    if p1.N != p2.N:
        raise RangeError("rescaling only relates parameters of equal dimension")
    r = p2.theta / p1.theta
    if grid is None:
        grid = Grid(f.grid.L / r, f.grid.n)
        return CylinderField.radial(p2, grid, f.sector(0))
    if r == 1.0 and grid == f.grid:
        return CylinderField.radial(p2, grid, f.sector(0))
    spline = CubicSpline(f.grid.t, f.sector(0))
    x = r * grid.t
    vals = np.where(np.abs(x) <= f.grid.L, spline(np.clip(x, -f.grid.L, f.grid.L)), 0.0)
    return CylinderField.radial(p2, grid, vals)


def dump_field(f: CylinderField) -> str:
    """CSV text: a '#'-prefixed JSON header line, then columns t,k,value."""
    from .reporting import fmt

    header = {"N": f.params.N, "gamma": f.params.gamma, "L": f.grid.L, "n": f.grid.n}
    out = io.StringIO()
    out.write("# " + json.dumps(header, sort_keys=True) + "\n")
    out.write("t,k,value\n")
    t = f.grid.t
    for s in f.sectors:
        for ti, vi in zip(t, s.values):
            out.write(f"{fmt(ti)},{s.k},{fmt(vi)}\n")
    return out.getvalue()


def load_field(text: str) -> CylinderField:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#"):
        raise ValueError("field file lacks the JSON header line")
    header = json.loads(lines[0][1:])
    p = make_params(header["N"], header["gamma"])
    g = Grid(float(header["L"]), int(header["n"]))
    data = np.loadtxt(io.StringIO("\n".join(lines[1:])), delimiter=",", skiprows=1, ndmin=2)
    profiles = {}
    for k in np.unique(data[:, 1]).astype(int):
        rows = data[data[:, 1] == k]
        if rows.shape[0] != g.n:
            raise GridMismatchError(f"sector {k} has {rows.shape[0]} rows, grid has {g.n}")
        profiles[int(k)] = rows[np.argsort(rows[:, 0]), 2]
    return CylinderField.from_sectors(p, g, profiles)
