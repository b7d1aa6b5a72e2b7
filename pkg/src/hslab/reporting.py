"""Deterministic JSON/CSV emission and optional SVG plots."""

from __future__ import annotations

import dataclasses
import json
import math
import os
from pathlib import Path

import numpy as np


def fmt(x) -> str:
    """Fixed 17-significant-digit rendering so reruns are byte-identical."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        # round-trip through the fixed format keeps output byte-stable
        return float(fmt(x)) if math.isfinite(x) else fmt(x)
    return obj


def to_json(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def to_csv(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def output_dir(default) -> Path:
    """Output directory, overridable through the HSLAB_OUT environment variable."""
    return Path(os.environ.get("HSLAB_OUT") or default)


def write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def svg_plot(path: Path, x, y, level: float, xlabel: str, ylabel: str, level_label: str) -> Path:
    """Line plot of y(x) against a horizontal reference level."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "hslab"
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(x, y, "o-", label=ylabel)
    ax.axhline(level, color="k", ls="--", lw=1, label=level_label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend()
    fig.tight_layout()
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path
