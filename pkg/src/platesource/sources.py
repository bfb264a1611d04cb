"""Built-in test sources and gridded sample replay.

The three analytic sources are the benchmark family used throughout the
experiments: a mountain-shaped smooth profile (``s1``), a piecewise
constant double disk (``s2``), and a peaks-style multi-bump profile
(``s3``). The two smooth profiles are Gaussian-localized rather than
exactly compactly supported; their tails outside the computation square
are treated as zero (quadrature only ever integrates over the square).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .core import CartesianGrid, RealArray

__all__ = ["SourceSpec", "eval_source", "sample", "analytic_gradient", "load_gridded_csv"]

VARIANTS = ("s1", "s2", "s3", "gridded")


def _s1(x1, x2):
    return 1.1 * np.exp(-200.0 * ((x1 - 0.01) ** 2 + (x2 - 0.12) ** 2)) - 100.0 * (
        x2**2 - x1**2
    ) * np.exp(-90.0 * (x1**2 + x2**2))


def _s1_grad(x1, x2):
    g = np.exp(-200.0 * ((x1 - 0.01) ** 2 + (x2 - 0.12) ** 2))
    e = np.exp(-90.0 * (x1**2 + x2**2))
    d1 = 1.1 * g * (-400.0 * (x1 - 0.01)) + e * (200.0 * x1 + 18000.0 * x1 * (x2**2 - x1**2))
    d2 = 1.1 * g * (-400.0 * (x2 - 0.12)) + e * (-200.0 * x2 + 18000.0 * x2 * (x2**2 - x1**2))
    return d1, d2


def _s2(x1, x2):
    r2 = x1**2 + x2**2
    # boundary conventions as printed: strict < on the inner disk, inclusive
    # <= on the annulus
    return np.where(r2 < 0.04, 0.8, np.where(r2 <= 0.09, 0.3, 0.0))


def _s3(x1, x2):
    return (
        0.3 * (1.0 - x1) ** 2 * np.exp(-(x1**2) - (x2 + 1.0) ** 2)
        - (0.2 * x1 - x1**3 - x2**5) * np.exp(-(x1**2) - x2**2)
        - 0.03 * np.exp(-((x1 + 1.0) ** 2) - x2**2)
    )


def _s3_grad(x1, x2):
    ea = np.exp(-(x1**2) - (x2 + 1.0) ** 2)
    eb = np.exp(-(x1**2) - x2**2)
    ec = np.exp(-((x1 + 1.0) ** 2) - x2**2)
    p = 0.2 * x1 - x1**3 - x2**5
    d1 = (
        0.3 * ea * (-2.0 * (1.0 - x1) - 2.0 * x1 * (1.0 - x1) ** 2)
        - eb * ((0.2 - 3.0 * x1**2) - 2.0 * x1 * p)
        + 0.06 * (x1 + 1.0) * ec
    )
    d2 = (
        -0.6 * (1.0 - x1) ** 2 * (x2 + 1.0) * ea
        - eb * (-5.0 * x2**4 - 2.0 * x2 * p)
        + 0.06 * x2 * ec
    )
    return d1, d2


_EVAL = {"s1": _s1, "s2": _s2, "s3": _s3}
_GRAD = {"s1": _s1_grad, "s3": _s3_grad}


@dataclass(frozen=True)
class SourceSpec:
    """A reconstructible source: a named analytic variant or gridded samples."""

    variant: str
    grid: CartesianGrid | None = None
    values: RealArray | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown source variant {self.variant!r}")
        if self.variant == "gridded":
            if self.grid is None or self.values is None:
                raise ValueError("gridded source needs both grid and values")
            v = np.asarray(self.values, dtype=float)
            n = self.grid.points_per_side
            if v.shape != (n * n,):
                raise ValueError(f"values must be flat with length {n * n}")
            v = np.ascontiguousarray(v)
            v.flags.writeable = False
            object.__setattr__(self, "values", v)

    @property
    def has_analytic_gradient(self) -> bool:
        return self.variant in _GRAD


def eval_source(spec: SourceSpec, x) -> float | np.ndarray:
    """Source value at point(s) ``x`` (trailing dimension 2).

    Gridded sources use nearest-sample lookup and reject points outside
    the sampled square.
    """
    pts = np.asarray(x, dtype=float)
    if pts.shape[-1] != 2:
        raise ValueError("x must have trailing dimension 2")
    x1, x2 = pts[..., 0], pts[..., 1]
    if spec.variant != "gridded":
        out = _EVAL[spec.variant](x1, x2)
        return float(out) if out.ndim == 0 else out
    g = spec.grid
    half = 0.5 * g.side_a
    if np.any((np.abs(x1) > half) | (np.abs(x2) > half)):
        raise ValueError("point outside the sampled square")
    n = g.points_per_side
    i = np.clip(np.rint((x1 + half) / g.spacing - 0.5).astype(int), 0, n - 1)
    j = np.clip(np.rint((x2 + half) / g.spacing - 0.5).astype(int), 0, n - 1)
    out = spec.values[i * n + j]
    return float(out) if np.ndim(out) == 0 else out


def sample(spec: SourceSpec, grid: CartesianGrid) -> RealArray:
    """Pointwise source values over the grid, flat C-ordered like the grid."""
    if spec.variant == "gridded" and abs(spec.grid.side_a - grid.side_a) > 1e-12 * grid.side_a:
        raise ValueError("grid side does not match the gridded source domain")
    return np.asarray(eval_source(spec, grid.points), dtype=float)


def analytic_gradient(spec: SourceSpec, grid: CartesianGrid):
    """Closed-form gradient samples for the smooth variants (s1, s3)."""
    if spec.variant not in _GRAD:
        raise ValueError(f"no analytic gradient for variant {spec.variant!r}")
    pts = grid.points
    d1, d2 = _GRAD[spec.variant](pts[:, 0], pts[:, 1])
    return np.asarray(d1, float), np.asarray(d2, float)


def load_gridded_csv(path) -> SourceSpec:
    """Load a gridded source from a CSV with columns x1, x2, value.

    The rows must cover a full cell-centered square grid in the repo's
    C order (x1 varying slowest).
    """
    xs, ys, vs = [], [], []
    with open(path, newline="") as fh:
        for row in csv.reader(r for r in fh if not r.startswith("#")):
            if not row or row[0] == "x1":
                continue
            xs.append(float(row[0]))
            ys.append(float(row[1]))
            vs.append(float(row[2]))
    m = len(vs)
    n = round(np.sqrt(m))
    if n * n != m or n < 2:
        raise ValueError(f"expected a square grid, got {m} rows")
    x1 = np.asarray(xs)
    side = float(x1.max() - x1.min()) * n / (n - 1)
    grid = CartesianGrid(side_a=side, points_per_side=n)
    if not (
        np.allclose(x1, grid.points[:, 0], atol=1e-9 * side)
        and np.allclose(np.asarray(ys), grid.points[:, 1], atol=1e-9 * side)
    ):
        raise ValueError("rows do not match a cell-centered square grid in C order")
    return SourceSpec(variant="gridded", grid=grid, values=np.asarray(vs))
