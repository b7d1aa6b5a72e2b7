"""Command-line entry point: one subcommand per experiment.

Exit codes: 0 success, 1 usage error, 2 invalid configuration or I/O
failure, 3 the computation ran but a numeric bound failed.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import acceptance, cylinder, euclidean, families, manifold, optimize, params, reporting, spectrum
from .cylinder import Grid, default_grid
from .errors import (
    ConvergenceError,
    DegenerateQuotientError,
    GridMismatchError,
    MissingRadialConstantError,
    RangeError,
    TailTruncationError,
)

EXIT_USAGE, EXIT_CONFIG, EXIT_NUMERIC = 1, 2, 3
FORMATS = {"json", "csv", "svg"}


class ConfigError(Exception):
    pass


class NumericFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    command: str
    N: int = 4
    gamma: float | None = None
    gamma_grid: int | None = None
    L: float | None = None
    n: int | None = None
    kmax: int = 6
    s_list: tuple | None = None
    z_list: tuple = (10.0, 20.0, 50.0)
    tol: float | None = None
    out: str = "hslab_out"
    formats: tuple = ("json", "csv")
    seed: int = 0
    field: str | None = None
    c_rad: float | None = None
    max_iter: int = 5000
    amplitude: float = 0.2


def _floats(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="hslab", description="Numerical laboratory for the Hardy-Sobolev stability constant.")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, gamma=True):
        sp.add_argument("--N", type=int, default=4, help="dimension (>= 3)")
        if gamma:
            sp.add_argument("--gamma", type=float, default=None, help="Hardy parameter (default: 3/4 of the range)")
        sp.add_argument("--L", type=float, default=None, help="grid half width override")
        sp.add_argument("--n", type=int, default=None, help="grid point count override (odd)")
        sp.add_argument("--out", default=None, help="output directory (HSLAB_OUT overrides the default)")
        sp.add_argument("--formats", default="json,csv", help="comma list from json,csv,svg")
        sp.add_argument("--tol", type=float, default=None, help="acceptance tolerance for this experiment")
        sp.add_argument("--seed", type=int, default=0)

    common(sub.add_parser("constants", help="closed-form constants, thresholds and positivity scans"))
    sp = sub.add_parser("spectrum", help="numeric spectral gap against the closed form")
    common(sp)
    sp.add_argument("--gamma-grid", type=int, default=None, help="sweep this many gamma values")
    sp.add_argument("--kmax", type=int, default=6)
    sp = sub.add_parser("quotient", help="evaluate the deficit/distance quotient of a field file")
    sp.add_argument("field", help="field CSV with JSON header")
    sp.add_argument("--out", default=None)
    sp.add_argument("--formats", default="json")
    sp = sub.add_parser("two-peak", help="2-peak expansion along a separation ladder")
    common(sp)
    sp.add_argument("--s-list", type=_floats, default=None, help="separations (default {8..16}/theta)")
    sp = sub.add_parser("hidden-level", help="far-translated Sobolev bubble in R^N")
    common(sp)
    sp.add_argument("--z-list", type=_floats, default=(10.0, 20.0, 50.0))
    common(sub.add_parser("interactions", help="interaction-rate fits on the cylinder and in R^N"))
    sp = sub.add_parser("radial-min", help="minimize the radial quotient")
    common(sp)
    sp.add_argument("--max-iter", type=int, default=5000)
    sp.add_argument("--amplitude", type=float, default=0.2, help="weight of the third radial eigenfunction in the seed")
    sp = sub.add_parser("gamma0", help="threshold gamma_0 from a radial-constant estimate")
    sp.add_argument("--N", type=int, default=4)
    sp.add_argument("--c-rad", type=float, default=None)
    sp.add_argument("--out", default=None)
    sp.add_argument("--formats", default="json")
    sp = sub.add_parser("verify-all", help="run the acceptance suite")
    sp.add_argument("--N", type=int, default=4)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None)
    sp.add_argument("--formats", default="json")
    return ap


def make_config(ns: argparse.Namespace) -> RunConfig:
    formats = tuple(sorted({f.strip() for f in getattr(ns, "formats", "json").split(",") if f.strip()}))
    bad = set(formats) - FORMATS
    if bad:
        raise ConfigError(f"unknown output formats {sorted(bad)}; choose from {sorted(FORMATS)}")
    out = ns.out if getattr(ns, "out", None) else str(reporting.output_dir("hslab_out"))
    cfg = RunConfig(
        command=ns.command,
        N=getattr(ns, "N", 4),
        gamma=getattr(ns, "gamma", None),
        gamma_grid=getattr(ns, "gamma_grid", None),
        L=getattr(ns, "L", None),
        n=getattr(ns, "n", None),
        kmax=getattr(ns, "kmax", 6),
        s_list=getattr(ns, "s_list", None),
        z_list=tuple(getattr(ns, "z_list", (10.0, 20.0, 50.0))),
        tol=getattr(ns, "tol", None),
        out=out,
        formats=formats,
        seed=getattr(ns, "seed", 0),
        field=getattr(ns, "field", None),
        c_rad=getattr(ns, "c_rad", None),
        max_iter=getattr(ns, "max_iter", 5000),
        amplitude=getattr(ns, "amplitude", 0.2),
    )
    validate(cfg)
    return cfg


def validate(cfg: RunConfig) -> None:
    """Range checks that must pass before any computation starts."""
    if cfg.command not in ("quotient",):
        params._check_dimension(cfg.N)
        if cfg.gamma is not None:
            params.make_params(cfg.N, cfg.gamma)
    if cfg.n is not None and (cfg.n < 3 or cfg.n % 2 == 0):
        raise ConfigError("--n must be odd and >= 3")
    if cfg.L is not None and not cfg.L > 0:
        raise ConfigError("--L must be positive")
    if cfg.gamma_grid is not None and cfg.gamma_grid < 1:
        raise ConfigError("--gamma-grid must be >= 1")
    if cfg.kmax < 3:
        raise ConfigError("--kmax must be >= 3")
    if any(z <= 0 for z in cfg.z_list):
        raise ConfigError("offsets in --z-list must be positive")
    if cfg.tol is not None and not cfg.tol > 0:
        raise ConfigError("--tol must be positive")
    if cfg.max_iter < 1:
        raise ConfigError("--max-iter must be >= 1")
    if cfg.field is not None and not Path(cfg.field).is_file():
        raise ConfigError(f"field file not found: {cfg.field}")


def _params(cfg: RunConfig):
    g = acceptance.default_gamma(cfg.N) if cfg.gamma is None else cfg.gamma
    return params.make_params(cfg.N, g)


def _grid(cfg: RunConfig, p, shift: float = 0.0) -> Grid:
    base = default_grid(p, shift)
    if cfg.L is None and cfg.n is None:
        return base
    return Grid(cfg.L if cfg.L is not None else base.L, cfg.n if cfg.n is not None else base.n)


class _Writer:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.dir = Path(cfg.out)
        self.files = []

    def json(self, name: str, payload: dict) -> str:
        text = reporting.to_json({"config": dataclasses.asdict(self.cfg), **payload})
        if "json" in self.cfg.formats:
            self.files.append(reporting.write_text(self.dir / f"{name}.json", text))
        return text

    def csv(self, name: str, header, rows) -> str:
        text = reporting.to_csv(header, rows)
        if "csv" in self.cfg.formats:
            self.files.append(reporting.write_text(self.dir / f"{name}.csv", text))
        return text

    def svg(self, name: str, *args, **kwargs) -> None:
        if "svg" in self.cfg.formats:
            self.files.append(reporting.svg_plot(self.dir / f"{name}.svg", *args, **kwargs))


def cmd_constants(cfg: RunConfig, w: _Writer) -> str:
    p = _params(cfg)
    try:
        thr = params.gamma_thresholds(cfg.N, cfg.c_rad)
    except MissingRadialConstantError as exc:
        thr = {"gamma_c_star": params.gamma_c_star(cfg.N), "gamma0": None, "note": str(exc)}
    return w.json(
        "constants",
        {
            "constants": params.constants_summary(p),
            "thresholds": thr,
            "positivity": params.positivity_scan(cfg.N, 2000),
            "sobolev_closed_form": params.sobolev_constant_closed_form(cfg.N),
        },
    )


def cmd_spectrum(cfg: RunConfig, w: _Writer) -> str:
    tol = cfg.tol or 1e-3
    grid_for = (lambda p: _grid(cfg, p)) if (cfg.L or cfg.n) else None
    if cfg.gamma_grid is not None:
        rows = spectrum.gap_sweep(cfg.N, cfg.gamma_grid, grid_for, cfg.kmax)
        dev = max(abs(r[1] - r[2]) for r in rows)
        w.json("spectrum", {"rows": rows, "max_abs_deviation": dev, "tolerance": tol, "passed": dev <= tol})
        text = w.csv("spectrum", ("gamma", "gap_numeric", "gap_formula", "mu3_sector"), rows)
        if dev > tol:
            raise NumericFailure(f"max |gap - Lambda| = {dev:.3e} exceeds {tol:g}")
        return text
    p = _params(cfg)
    g = _grid(cfg, p)
    res = spectrum.spectral_gap_numeric(p, g, cfg.kmax)
    target = params.spectral_gap_formula(p)
    text = w.json("spectrum", {"grid": g, "result": res, "target_Lambda": target, "tolerance": tol})
    w.csv("spectrum", ("gamma", "gap_numeric", "gap_formula", "mu3_sector"), [(p.gamma, res.gap, target, res.mu3_sector)])
    if abs(res.gap - target) > tol:
        raise NumericFailure(f"|gap - Lambda| = {abs(res.gap - target):.3e} exceeds {tol:g}")
    return text


def cmd_quotient(cfg: RunConfig, w: _Writer) -> str:
    try:
        f = cylinder.load_field(Path(cfg.field).read_text())
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"cannot read field file {cfg.field}: {exc}") from exc
    rep = manifold.be_quotient(f)
    return w.json("quotient", {"report": rep, "label": "upper-bound evaluation on one field"})


def cmd_two_peak(cfg: RunConfig, w: _Writer) -> str:
    p = _params(cfg)
    s_list = list(cfg.s_list) if cfg.s_list else families.default_ladder(p)
    g = _grid(cfg, p, max(abs(s) for s in s_list))
    reps = families.two_peak_report(p, g, s_list)
    level = params.two_peak_level(p.N)
    header, rows = families.two_peak_rows(reps)
    text = w.json("two_peak", {"grid": g, "reports": reps, "target_two_peak_level": level})
    w.csv("two_peak", header, rows)
    w.svg("two_peak", [r.s for r in reps], [r.quotient for r in reps], level, "s", "quotient", "2 - 2^(2/2*)")
    if not reps[-1].quotient < level:
        raise NumericFailure("quotient at the top of the ladder is not below the 2-peak level")
    return text


def cmd_hidden(cfg: RunConfig, w: _Writer) -> str:
    p = _params(cfg)
    tol = cfg.tol or 0.05
    rows = euclidean.hidden_level_rows(p, cfg.z_list)
    target = rows[0][4]
    rel = abs(rows[-1][3] / target - 1.0)
    text = w.json("hidden_level", {"rows": rows, "target_hidden_level": target, "tolerance": tol, "relative_error_last": rel})
    w.csv("hidden_level", ("z", "hardy_term", "m_value", "quotient", "target"), rows)
    w.svg("hidden_level", [r[0] for r in rows], [r[3] for r in rows], target, "z", "quotient", "1 - S_gamma/S")
    if rel > tol:
        raise NumericFailure(f"quotient at z={rows[-1][0]:g} is {rel:.2%} from the hidden level")
    return text


def cmd_interactions(cfg: RunConfig, w: _Writer) -> str:
    c = acceptance.criterion_rates(N=cfg.N, gamma=cfg.gamma)
    text = w.json("interactions", {"checks": c.checks, "notes": c.notes, "passed": c.passed})
    if not c.passed:
        raise NumericFailure("; ".join(ch.name for ch in c.checks if not ch.ok))
    return text


def cmd_radial_min(cfg: RunConfig, w: _Writer) -> str:
    p = _params(cfg)
    g = _grid(cfg, p)
    init = optimize.default_init(p, g, cfg.amplitude)
    res = optimize.minimize_radial_quotient(p, g, init, optimize.MinimizeOptions(max_iter=cfg.max_iter))
    bounds = optimize.bound_check(p, res.c_rad_estimate)
    payload = {
        "grid": g,
        "c_rad_estimate": res.c_rad_estimate,
        "label": "upper bound for the radial constant",
        "iterations": res.iterations,
        "converged": res.converged,
        "restarts": res.restarts,
        "history": res.history,
        "bounds": bounds,
    }
    if cfg.N >= 4:
        payload["gamma0"] = optimize.gamma0_from_estimate(cfg.N, res.c_rad_estimate)
    text = w.json("radial_min", payload)
    if "csv" in cfg.formats:
        w.files.append(reporting.write_text(w.dir / "radial_min_field.csv", cylinder.dump_field(res.minimizer)))
    if not (res.converged and bounds["below"]):
        raise NumericFailure("radial minimization did not converge below min(Lambda, 2-peak level)")
    return text


def cmd_gamma0(cfg: RunConfig, w: _Writer) -> str:
    thr = params.gamma_thresholds(cfg.N, cfg.c_rad)
    if cfg.N >= 4 and cfg.c_rad is not None and not (0.0 < cfg.c_rad < 4.0 / (cfg.N + 4)):
        thr["out_of_range"] = True
    return w.json("gamma0", {"thresholds": thr})


def cmd_verify_all(cfg: RunConfig, w: _Writer) -> str:
    results = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for crit in acceptance.run_all(cfg.N, cfg.seed):
            print(crit.line(), flush=True)
            results.append(crit)
    payload = {
        "criteria": [
            {"number": c.number, "title": c.title, "passed": c.passed, "checks": c.checks, "budget_s": c.budget}
            for c in results
        ]
    }
    w.json("verify_all", payload)
    failed = [c.number for c in results if not c.passed]
    summary = f"{len(results) - len(failed)}/{len(results)} criteria passed"
    if failed:
        raise NumericFailure(f"{summary}; failing: {failed}")
    return summary + "\n"


COMMANDS = {
    "constants": cmd_constants,
    "spectrum": cmd_spectrum,
    "quotient": cmd_quotient,
    "two-peak": cmd_two_peak,
    "hidden-level": cmd_hidden,
    "interactions": cmd_interactions,
    "radial-min": cmd_radial_min,
    "gamma0": cmd_gamma0,
    "verify-all": cmd_verify_all,
}


def main(argv=None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    if ns.command is None:
        ap.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        cfg = make_config(ns)
        w = _Writer(cfg)
        text = COMMANDS[cfg.command](cfg, w)
        sys.stdout.write(text)
        return 0
    except (ConfigError, RangeError, TailTruncationError, GridMismatchError, MissingRadialConstantError, OSError) as exc:
        print(f"hslab: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericFailure, DegenerateQuotientError, ConvergenceError) as exc:
        print(f"hslab: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
