"""Outward continuation of measured boundary data ("lifting").

Measured Dirichlet data (u, lap_u) on the inner circle splits into an
oscillatory part and an evanescent part,

    u_h = -(lap_u - k^2 u) / (2 k^2),    u_m = (lap_u + k^2 u) / (2 k^2),

which solve the Helmholtz and modified Helmholtz equations in the
exterior and recombine as ``u = u_h + u_m``, ``lap_u = k^2 (u_m - u_h)``.
Each part is expanded in angular modes on the inner circle and carried to
a larger circle with the outward Hankel / modified-Bessel ratios of
:mod:`platesource.specfun`, which also supply the normal derivatives. The
output is full Cauchy data on the outer circle.

With a partial measurement arc the modal integrals run over the available
angles only (no inpainting of the unmeasured arc); the resulting modal
coefficients are then approximations whose error grows as the aperture
shrinks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import CauchyTrace, CircleGrid, ComplexArray
from .specfun import transfer_tables

__all__ = ["SplitTrace", "ModalCoefficients", "split_fields", "modal_analyze",
           "analyze_split", "propagate_cauchy", "lift_trace"]

_ATTENUATION_TOL = 1e-12


@dataclass(frozen=True)
class SplitTrace:
    """Oscillatory (u_h) and evanescent (u_m) parts of a measured trace."""

    wavenumber: float
    circle: CircleGrid
    u_h: ComplexArray
    u_m: ComplexArray


@dataclass(frozen=True)
class ModalCoefficients:
    """Angular mode coefficients of the split fields on the base circle."""

    wavenumber: float
    base_radius: float
    n_max: int
    coeff_h: ComplexArray = field(repr=False)
    coeff_m: ComplexArray = field(repr=False)

    def __post_init__(self):
        want = 2 * self.n_max + 1
        for name in ("coeff_h", "coeff_m"):
            arr = np.asarray(getattr(self, name), complex)
            if arr.shape != (want,):
                raise ValueError(f"{name} must have length {want}")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite entries")
            object.__setattr__(self, name, arr)

    @property
    def orders(self) -> np.ndarray:
        return np.arange(-self.n_max, self.n_max + 1)


def split_fields(trace: CauchyTrace) -> SplitTrace:
    """Split measured (u, lap_u) into oscillatory and evanescent parts."""
    k = trace.wavenumber
    if k == 0:
        raise ValueError("wavenumber must be nonzero")
    u_h = -(trace.lap_u - k * k * trace.u) / (2.0 * k * k)
    u_m = (trace.lap_u + k * k * trace.u) / (2.0 * k * k)
    return SplitTrace(wavenumber=k, circle=trace.circle, u_h=u_h, u_m=u_m)


def modal_analyze(values, circle: CircleGrid, n_max: int) -> ComplexArray:
    """Angular mode coefficients ``(1/2pi) int v(theta) e^{-i n theta} dtheta``.

    Rectangle-rule discretization over the available arc: exact up to
    aliasing for band-limited data on a full circle; on a partial arc it
    returns the truncated integral over the measured angles only.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    v = np.asarray(values, complex)
    if v.shape != (circle.angle_count,):
        raise ValueError("values length does not match the circle")
    ns = np.arange(-n_max, n_max + 1)
    weight = circle.aperture / (2.0 * np.pi * circle.angle_count)
    return np.exp(-1j * np.outer(ns, circle.angles)) @ v * weight


def analyze_split(split: SplitTrace, n_max: int) -> ModalCoefficients:
    """Modal coefficients of both split parts."""
    return ModalCoefficients(
        wavenumber=split.wavenumber,
        base_radius=split.circle.radius,
        n_max=n_max,
        coeff_h=modal_analyze(split.u_h, split.circle, n_max),
        coeff_m=modal_analyze(split.u_m, split.circle, n_max),
    )


def propagate_cauchy(mc: ModalCoefficients, rho: float, out_circle: CircleGrid) -> CauchyTrace:
    """Full Cauchy data on the outer circle from base-circle modes.

    Requires ``rho >= base_radius`` (outward continuation only) and
    ``out_circle.radius == rho``.
    """
    k, R = mc.wavenumber, mc.base_radius
    if rho < R:
        raise ValueError("outward continuation requires rho >= base radius")
    if abs(out_circle.radius - rho) > 1e-12 * max(rho, 1.0):
        raise ValueError("out_circle radius must equal rho")
    h_val, h_der, k_val, k_der = transfer_tables(mc.n_max, k * rho, k * R)
    absn = np.abs(mc.orders)
    # outward decay of every mode; violation means the tables are wrong
    if np.any(np.abs(h_val) > 1.0 + _ATTENUATION_TOL) or np.any(
        (k_val <= 0.0) | (k_val > 1.0 + _ATTENUATION_TOL)
    ):
        raise AssertionError("outward transfer factors must attenuate")
    ch = mc.coeff_h * h_val[absn]
    cm = mc.coeff_m * k_val[absn]
    dh = mc.coeff_h * (k * h_der[absn])
    dm = mc.coeff_m * (k * k_der[absn])
    basis = np.exp(1j * np.outer(out_circle.angles, mc.orders))
    u_h, u_m = basis @ ch, basis @ cm
    dnu_h, dnu_m = basis @ dh, basis @ dm
    return CauchyTrace(
        wavenumber=k,
        circle=out_circle,
        u=u_h + u_m,
        lap_u=k * k * (u_m - u_h),
        dnu_u=dnu_h + dnu_m,
        dnu_lap_u=k * k * (dnu_m - dnu_h),
    )


def lift_trace(trace: CauchyTrace, rho: float, out_circle: CircleGrid, n_max: int) -> CauchyTrace:
    """Convenience composition: split, analyze, propagate."""
    return propagate_cauchy(analyze_split(split_fields(trace), n_max), rho, out_circle)
