"""Shared geometry, trace containers, and the plane-wave basis.

Conventions fixed here and relied on repo-wide:

* Square evaluation/quadrature domains are cell-centered: an ``n``-point
  axis over a period ``a`` samples ``x = -a/2 + (j + 1/2) h`` with
  ``h = a / n``, so no sample lies on the domain boundary and the
  equal-weight quadrature weight is exactly ``h**2``.
* Circle grids start at angle ``aperture / count`` and end at ``aperture``
  (the angle ``0`` itself is excluded); on a full circle the samples are the
  standard uniform DFT nodes.
* Flattened fields over a :class:`CartesianGrid` are C-ordered with the
  first axis along ``x1``: entry ``i * n + j`` sits at ``(x1[i], x2[j])``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from numpy.typing import NDArray

ComplexArray = NDArray[np.complexfloating]
RealArray = NDArray[np.floating]

__all__ = [
    "ModeIndex",
    "CartesianGrid",
    "CircleGrid",
    "CauchyTrace",
    "fourier_basis",
    "make_cartesian_grid",
    "make_circle_grid",
]


class ModeIndex(NamedTuple):
    """Index of one basis mode; integer pair, or ``(lambda, 0)`` for the
    small-offset surrogate of the constant mode."""

    l1: float
    l2: float

    @property
    def norm(self) -> float:
        return float(np.hypot(self.l1, self.l2))


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class CartesianGrid:
    """Uniform cell-centered grid over the square ``(-a/2, a/2)^2``."""

    side_a: float
    points_per_side: int
    x1: RealArray = field(repr=False, default=None)
    x2: RealArray = field(repr=False, default=None)

    def __post_init__(self):
        if self.side_a <= 0:
            raise ValueError("side_a must be positive")
        if self.points_per_side < 2:
            raise ValueError("points_per_side must be at least 2")
        if self.x1 is None:
            h = self.spacing
            axis = -0.5 * self.side_a + (np.arange(self.points_per_side) + 0.5) * h
            object.__setattr__(self, "x1", _freeze(axis))
            object.__setattr__(self, "x2", _freeze(axis.copy()))

    @property
    def spacing(self) -> float:
        return self.side_a / self.points_per_side

    @property
    def points(self) -> RealArray:
        """All grid points as an ``(n**2, 2)`` array, C-ordered over (x1, x2)."""
        X1, X2 = np.meshgrid(self.x1, self.x2, indexing="ij")
        return np.column_stack([X1.ravel(), X2.ravel()])


@dataclass(frozen=True)
class CircleGrid:
    """Uniform angular samples ``theta_j = j * aperture / count``, j = 1..count."""

    radius: float
    angle_count: int
    aperture: float = 2.0 * np.pi
    angles: RealArray = field(repr=False, default=None)

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        if self.angle_count < 1:
            raise ValueError("angle_count must be at least 1")
        if not 0.0 < self.aperture <= 2.0 * np.pi + 1e-15:
            raise ValueError("aperture must lie in (0, 2*pi]")
        if self.angles is None:
            th = np.arange(1, self.angle_count + 1) * (self.aperture / self.angle_count)
            object.__setattr__(self, "angles", _freeze(th))

    @property
    def is_full(self) -> bool:
        return abs(self.aperture - 2.0 * np.pi) <= 1e-12

    @property
    def points(self) -> RealArray:
        return self.radius * np.column_stack([np.cos(self.angles), np.sin(self.angles)])

    @property
    def normals(self) -> RealArray:
        """Outward unit normals (equal to point / radius on a circle)."""
        return np.column_stack([np.cos(self.angles), np.sin(self.angles)])


def _check_trace_array(name: str, arr, count: int) -> ComplexArray:
    a = np.asarray(arr, dtype=np.complex128)
    if a.shape != (count,):
        raise ValueError(f"{name} must have shape ({count},), got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return _freeze(a)


@dataclass(frozen=True)
class CauchyTrace:
    """Boundary data of one field at one wavenumber, sampled on a circle.

    ``u`` and ``lap_u`` (the field and its Laplacian) are always present;
    the normal derivatives ``dnu_u`` and ``dnu_lap_u`` are either both
    present or both absent.
    """

    wavenumber: float
    circle: CircleGrid
    u: ComplexArray
    lap_u: ComplexArray
    dnu_u: ComplexArray | None = None
    dnu_lap_u: ComplexArray | None = None

    def __post_init__(self):
        if self.wavenumber <= 0:
            raise ValueError("wavenumber must be positive")
        n = self.circle.angle_count
        object.__setattr__(self, "u", _check_trace_array("u", self.u, n))
        object.__setattr__(self, "lap_u", _check_trace_array("lap_u", self.lap_u, n))
        if (self.dnu_u is None) != (self.dnu_lap_u is None):
            raise ValueError("dnu_u and dnu_lap_u must be both present or both absent")
        if self.dnu_u is not None:
            object.__setattr__(self, "dnu_u", _check_trace_array("dnu_u", self.dnu_u, n))
            object.__setattr__(
                self, "dnu_lap_u", _check_trace_array("dnu_lap_u", self.dnu_lap_u, n)
            )

    @property
    def has_derivatives(self) -> bool:
        return self.dnu_u is not None


def fourier_basis(l: ModeIndex | tuple, x, a: float):
    """Evaluate ``exp(i (2 pi / a) (l1 x1 + l2 x2))``.

    Parameters
    ----------
    l : ModeIndex or pair of reals
    x : array-like with trailing dimension 2 (a single point or many)
    a : period of the square domain

    The conjugate basis function is obtained by negating ``l``.
    """
    if a <= 0:
        raise ValueError("period a must be positive")
    l1, l2 = float(l[0]), float(l[1])
    pts = np.asarray(x, dtype=float)
    if pts.shape[-1] != 2:
        raise ValueError("x must have trailing dimension 2")
    phase = (2.0 * np.pi / a) * (l1 * pts[..., 0] + l2 * pts[..., 1])
    out = np.exp(1j * phase)
    return complex(out) if out.ndim == 0 else out


def make_cartesian_grid(a: float, n: int) -> CartesianGrid:
    """Cell-centered ``n x n`` grid over ``(-a/2, a/2)^2``."""
    return CartesianGrid(side_a=float(a), points_per_side=int(n))


def make_circle_grid(radius: float, count: int, aperture: float = 2.0 * np.pi) -> CircleGrid:
    """Uniform circle samples at ``theta_j = j * aperture / count``, j = 1..count."""
    return CircleGrid(radius=float(radius), angle_count=int(count), aperture=float(aperture))
