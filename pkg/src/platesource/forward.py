"""Synthetic-data generator: radiated field traces via volume quadrature.

The outgoing kernel for the fourth-order operator splits into an
oscillatory part and an evanescent part,

    g(r)      = (i / (8 k^2)) * (H0(k r) + (2i / pi) * K0(k r)),
    (lap g)(r) = -(i / 8)     * (H0(k r) - (2i / pi) * K0(k r)),

with radial derivatives obtained from ``H0' = -H1`` and ``K0' = -K1``.
Fields on a measurement circle are equal-weight midpoint sums of the
kernel against source samples on the cell-centered quadrature grid; the
circle must lie strictly outside the source square so the kernel is never
evaluated near ``r = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .core import CartesianGrid, CauchyTrace, CircleGrid
from .sources import SourceSpec, sample

__all__ = ["KernelValue", "kernel", "radiate_trace", "R_MIN", "TRACE_FIELDS", "KERNEL_FIELDS"]

R_MIN = 1e-12
TRACE_FIELDS = ("u", "lap_u", "dnu_u", "dnu_lap_u")
KERNEL_FIELDS = ("g", "lap_g", "grad_g", "grad_lap_g")
# angle block size for the quadrature matvec; bounds peak memory at
# roughly block * quad_points * 16 bytes per intermediate
_BLOCK = 64


@dataclass(frozen=True)
class KernelValue:
    """Kernel and its derived quantities at one source/target pair."""

    g: complex | None = None
    lap_g: complex | None = None
    grad_g: np.ndarray | None = None
    grad_lap_g: np.ndarray | None = None


def _parts(k: float, r: np.ndarray):
    """Oscillatory/evanescent combination weights at distances ``r``."""
    kr = k * r
    h0 = special.j0(kr) + 1j * special.y0(kr)
    q0 = special.k0(kr)
    return h0, q0


def _deriv_parts(k: float, r: np.ndarray):
    kr = k * r
    h1 = special.j1(kr) + 1j * special.y1(kr)
    q1 = special.k1(kr)
    return h1, q1


def kernel(k: float, x, y, needs=KERNEL_FIELDS) -> KernelValue:
    """Outgoing kernel between a target ``x`` and a source point ``y``.

    ``needs`` selects which of g, lap_g, grad_g, grad_lap_g to fill;
    unrequested entries stay ``None``. The separation must exceed
    ``R_MIN`` (targets never approach source points in this artifact).
    """
    if k <= 0:
        raise ValueError("wavenumber must be positive")
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    d = x - y
    r = float(np.hypot(d[0], d[1]))
    if r <= R_MIN:
        raise ValueError(f"kernel evaluated at separation {r} <= {R_MIN}")
    need = set(needs)
    unknown = need.difference({"g", "lap_g", "grad_g", "grad_lap_g"})
    if unknown:
        raise ValueError(f"unknown kernel components {sorted(unknown)}")
    out = {}
    if need & {"g", "lap_g"}:
        h0, q0 = _parts(k, np.asarray(r))
        if "g" in need:
            out["g"] = complex(1j / (8.0 * k * k) * h0 - q0 / (4.0 * np.pi * k * k))
        if "lap_g" in need:
            out["lap_g"] = complex(-1j / 8.0 * h0 - q0 / (4.0 * np.pi))
    if need & {"grad_g", "grad_lap_g"}:
        h1, q1 = _deriv_parts(k, np.asarray(r))
        unit = d / r
        if "grad_g" in need:
            dg = complex(-1j / (8.0 * k) * h1 + q1 / (4.0 * np.pi * k))
            out["grad_g"] = dg * unit
        if "grad_lap_g" in need:
            dl = complex(1j * k / 8.0 * h1 + k / (4.0 * np.pi) * q1)
            out["grad_lap_g"] = dl * unit
    return KernelValue(**out)


def radiate_trace(
    spec: SourceSpec,
    k: float,
    circle: CircleGrid,
    quad_grid: CartesianGrid,
    needs=("u", "lap_u"),
) -> CauchyTrace:
    """Radiated boundary data on ``circle`` from the source.

    Evaluates ``u = sum_m g(x, y_m) S(y_m) h^2`` (and the requested
    companions) over the cell-centered quadrature grid. ``needs`` is
    either ``("u", "lap_u")`` or all four trace fields.
    """
    need = tuple(needs)
    if need not in (TRACE_FIELDS[:2], TRACE_FIELDS):
        raise ValueError("needs must be ('u', 'lap_u') or all four trace fields")
    half_diag = quad_grid.side_a * np.sqrt(2.0) / 2.0
    if circle.radius <= half_diag:
        raise ValueError(
            f"circle radius {circle.radius} does not clear the source square "
            f"(needs > {half_diag:.6g})"
        )
    weights = sample(spec, quad_grid) * quad_grid.spacing**2
    pts = quad_grid.points
    cpts = circle.points
    n_ang = circle.angle_count
    derivs = len(need) == 4

    u = np.empty(n_ang, complex)
    lap_u = np.empty(n_ang, complex)
    dnu_u = np.empty(n_ang, complex) if derivs else None
    dnu_lap_u = np.empty(n_ang, complex) if derivs else None
    for i0 in range(0, n_ang, _BLOCK):
        sl = slice(i0, min(i0 + _BLOCK, n_ang))
        dx = cpts[sl, 0:1] - pts[None, :, 0]
        dy = cpts[sl, 1:2] - pts[None, :, 1]
        r = np.hypot(dx, dy)
        h0, q0 = _parts(k, r)
        p = h0 @ weights
        q = q0 @ weights
        u[sl] = 1j / (8.0 * k * k) * p - q / (4.0 * np.pi * k * k)
        lap_u[sl] = -1j / 8.0 * p - q / (4.0 * np.pi)
        if derivs:
            h1, q1 = _deriv_parts(k, r)
            cosdir = (cpts[sl, 0:1] * dx + cpts[sl, 1:2] * dy) / (circle.radius * r)
            a = (h1 * cosdir) @ weights
            b = (q1 * cosdir) @ weights
            dnu_u[sl] = -1j / (8.0 * k) * a + b / (4.0 * np.pi * k)
            dnu_lap_u[sl] = 1j * k / 8.0 * a + k / (4.0 * np.pi) * b
    return CauchyTrace(
        wavenumber=float(k),
        circle=circle,
        u=u,
        lap_u=lap_u,
        dnu_u=dnu_u,
        dnu_lap_u=dnu_lap_u,
    )
