"""Discrete relative L2 and H1 reconstruction errors."""

from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np

from .core import CartesianGrid

__all__ = ["ErrorReport", "rel_l2", "rel_h1", "grid_gradient"]


@dataclass(frozen=True)
class ErrorReport:
    rel_l2: float
    N_used: int
    delta: float
    wall_time_s: float
    rel_h1: float | None = None

    def __post_init__(self):
        if not np.isfinite(self.rel_l2) or (
            self.rel_h1 is not None and not np.isfinite(self.rel_h1)
        ):
            raise ValueError("error values must be finite")

    def to_dict(self) -> dict:
        return asdict(self)


def rel_l2(approx, exact) -> float:
    """``||approx - exact|| / ||exact||`` over all grid samples."""
    a = np.asarray(approx)
    e = np.asarray(exact)
    if a.shape != e.shape:
        raise ValueError("fields must share a grid")
    den = np.linalg.norm(e)
    if den == 0.0:
        raise ZeroDivisionError("exact field is identically zero")
    return float(np.linalg.norm(a - e) / den)


def grid_gradient(values, grid: CartesianGrid):
    """Finite-difference gradient of a flat field: central differences
    inside, one-sided at the grid edges."""
    n = grid.points_per_side
    f = np.asarray(values).reshape(n, n)
    g1, g2 = np.gradient(f, grid.spacing, edge_order=1)
    return g1.ravel(), g2.ravel()


def rel_h1(approx, approx_grad, exact, grid: CartesianGrid, exact_grad=None) -> float:
    """Relative H1 error ``sqrt(sum |grad diff|^2 + |diff|^2) / sqrt(...)``.

    The exact gradient defaults to grid finite differences; pass
    ``exact_grad`` (a pair of flat fields) to use closed-form derivatives
    instead.
    """
    a = np.asarray(approx)
    e = np.asarray(exact)
    if a.shape != e.shape:
        raise ValueError("fields must share a grid")
    g1a, g2a = (np.asarray(g) for g in approx_grad)
    if exact_grad is None:
        g1e, g2e = grid_gradient(e, grid)
    else:
        g1e, g2e = (np.asarray(g) for g in exact_grad)
    num = (
        np.sum(np.abs(g1a - g1e) ** 2 + np.abs(g2a - g2e) ** 2)
        + np.sum(np.abs(a - e) ** 2)
    )
    den = np.sum(np.abs(g1e) ** 2 + np.abs(g2e) ** 2) + np.sum(np.abs(e) ** 2)
    if den == 0.0:
        raise ZeroDivisionError("exact field is identically zero")
    return float(np.sqrt(num / den))
