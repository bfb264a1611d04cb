"""Regenerate figures (surface, contour, cross sections, error map) from
the experiment harness's CSV/JSON outputs.

This package deliberately consumes only the on-disk interface: a
``grid.csv`` with one JSON header line and columns
``x1,x2,re_recon,im_recon,exact,abs_err`` (row-major, x1 varying slowest)
plus the run's ``report.json``, whose recorded field extrema pin the
color scales. Outputs are PNG and SVG with deterministic bytes, so
repeated renders overwrite identically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "figures"

import matplotlib.pyplot as plt
import numpy as np

from .styles import DPI, FIGSIZE, style_for

__all__ = ["FigureRequest", "RenderError", "render", "KINDS"]

SCHEMA_VERSION = 1
KINDS = ("surface", "contour", "cross_section", "error_map")


class RenderError(RuntimeError):
    """Input files are missing or malformed (message carries file/line)."""


@dataclass(frozen=True)
class FigureRequest:
    input_dir: str
    example_id: int
    kinds: tuple = KINDS
    cross_section_lines: tuple | None = None
    output_dir: str | None = None

    def __post_init__(self):
        unknown = set(self.kinds) - set(KINDS)
        if unknown:
            raise ValueError(f"unknown figure kinds {sorted(unknown)}; known: {KINDS}")


@dataclass
class GridData:
    period: float
    x1: np.ndarray
    x2: np.ndarray
    recon: np.ndarray = field(repr=False)  # real part, (n, n)
    exact: np.ndarray = field(repr=False)
    abs_err: np.ndarray = field(repr=False)
    vmin: float = 0.0
    vmax: float = 1.0
    err_max: float = 1.0


def _fail(path: Path, lineno: int, msg: str):
    raise RenderError(f"{path}:{lineno}: {msg}")


def load_grid(input_dir: str | Path) -> GridData:
    """Parse grid.csv (+ report.json extrema) with precise error locations."""
    d = Path(input_dir)
    path = d / "grid.csv"
    if not path.exists():
        raise RenderError(f"{path}: missing grid CSV")
    lines = path.read_text().splitlines()
    if not lines or not lines[0].startswith("# "):
        _fail(path, 1, "expected JSON header comment")
    try:
        meta = json.loads(lines[0][2:])
    except json.JSONDecodeError as exc:
        _fail(path, 1, f"bad JSON header: {exc}")
    if meta.get("schema") != SCHEMA_VERSION:
        _fail(path, 1, f"schema {meta.get('schema')} unsupported (want {SCHEMA_VERSION})")
    want_cols = "x1,x2,re_recon,im_recon,exact,abs_err"
    if len(lines) < 2 or lines[1] != want_cols:
        _fail(path, 2, f"expected columns {want_cols}")
    n = int(meta["points_per_side"])
    rows = []
    for i, line in enumerate(lines[2:], start=3):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 6:
            _fail(path, i, f"expected 6 fields, found {len(parts)}")
        try:
            rows.append([float(v) for v in parts])
        except ValueError:
            _fail(path, i, f"non-numeric field in {line!r}")
    if len(rows) != n * n:
        _fail(path, len(lines), f"expected {n * n} data rows, found {len(rows)}")
    data = np.asarray(rows)
    x1 = data[::n, 0]
    x2 = data[:n, 1]
    recon = data[:, 2].reshape(n, n)
    exact = data[:, 4].reshape(n, n)
    abs_err = data[:, 5].reshape(n, n)

    report_path = d / "report.json"
    if report_path.exists():
        fr = json.loads(report_path.read_text()).get("field_range", {})
        vmin = min(fr.get("recon_min", recon.min()), fr.get("exact_min", exact.min()))
        vmax = max(fr.get("recon_max", recon.max()), fr.get("exact_max", exact.max()))
        err_max = fr.get("abs_err_max", abs_err.max())
    else:
        vmin, vmax = min(recon.min(), exact.min()), max(recon.max(), exact.max())
        err_max = abs_err.max()
    return GridData(
        period=float(meta["period"]),
        x1=x1,
        x2=x2,
        recon=recon,
        exact=exact,
        abs_err=abs_err,
        vmin=float(vmin),
        vmax=float(vmax),
        err_max=float(err_max),
    )


def build_surface(g: GridData, example_id: int):
    s = style_for(example_id)
    fig = plt.figure(figsize=FIGSIZE)
    ax = fig.add_subplot(projection="3d")
    X1, X2 = np.meshgrid(g.x1, g.x2, indexing="ij")
    ax.plot_surface(
        X1, X2, g.recon, cmap=s["cmap"], vmin=g.vmin, vmax=g.vmax,
        rstride=2, cstride=2, linewidth=0,
    )
    ax.view_init(**s["surface_view"])
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    ax.set_zlim(g.vmin, g.vmax)
    ax.set_title("reconstruction")
    return fig


def build_contour(g: GridData, example_id: int):
    s = style_for(example_id)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    X1, X2 = np.meshgrid(g.x1, g.x2, indexing="ij")
    m = ax.contourf(
        X1, X2, g.recon, levels=s["contour_levels"], cmap=s["cmap"],
        vmin=g.vmin, vmax=g.vmax,
    )
    fig.colorbar(m, ax=ax)
    ax.set_aspect("equal")
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    ax.set_title("reconstruction")
    return fig


def build_cross_section(g: GridData, example_id: int, x2_value: float):
    fig, ax = plt.subplots(figsize=FIGSIZE)
    j = int(np.argmin(np.abs(g.x2 - x2_value)))
    ax.plot(g.x1, g.exact[:, j], "-", label="exact", linewidth=1.6)
    ax.plot(g.x1, g.recon[:, j], "--", label="reconstruction", linewidth=1.4)
    ax.set_xlabel("x1")
    ax.set_ylabel("value")
    ax.set_title(f"cross section at x2 = {g.x2[j]:.4g}")
    ax.legend()
    return fig


def build_error_map(g: GridData, example_id: int):
    s = style_for(example_id)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    X1, X2 = np.meshgrid(g.x1, g.x2, indexing="ij")
    m = ax.pcolormesh(X1, X2, g.abs_err, cmap=s["cmap"], vmin=0.0, vmax=g.err_max)
    fig.colorbar(m, ax=ax)
    ax.set_aspect("equal")
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    ax.set_title("absolute error")
    return fig


def _save(fig, stem: Path) -> list[Path]:
    out = []
    for ext in ("png", "svg"):
        # append (not with_suffix): stems may contain dots, e.g. x2_m1.5
        path = stem.parent / f"{stem.name}.{ext}"
        fig.savefig(path, dpi=DPI, metadata={"Date": None})
        out.append(path)
    plt.close(fig)
    return out


def render(req: FigureRequest) -> list[Path]:
    """Render every requested kind; returns the written files."""
    g = load_grid(req.input_dir)
    out_dir = Path(req.output_dir or req.input_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = out_dir / f"example{req.example_id}"
    written: list[Path] = []
    for kind in req.kinds:
        if kind == "surface":
            written += _save(build_surface(g, req.example_id), stem.with_name(stem.name + "_surface"))
        elif kind == "contour":
            written += _save(build_contour(g, req.example_id), stem.with_name(stem.name + "_contour"))
        elif kind == "error_map":
            written += _save(build_error_map(g, req.example_id), stem.with_name(stem.name + "_error_map"))
        elif kind == "cross_section":
            lines = req.cross_section_lines
            if lines is None:
                lines = tuple(style_for(req.example_id)["cross_sections"])
            for v in lines:
                name = f"{stem.name}_cross_x2_{format(v, 'g').replace('-', 'm')}"
                written += _save(
                    build_cross_section(g, req.example_id, float(v)),
                    stem.with_name(name),
                )
    return written
