"""Estimator-style entry point for the reconstruction.

``FourierSourceReconstructor`` follows the scikit-learn protocol: all
configuration in ``__init__`` (so ``get_params`` / ``set_params`` and
pipeline composition work), data in ``fit``, evaluation in ``predict``.
``X`` is the collection of measured boundary traces, one per distinct
wavenumber of the admissible set.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .core import CartesianGrid, CauchyTrace, make_cartesian_grid, make_circle_grid
from .lift import lift_trace
from .noise import LAP_SCALES, NoiseParams, perturb_trace
from .recon import (
    CoefficientTable,
    ZERO_MODE_KEY,
    admissible_wavenumbers,
    fourier_coefficient,
    synthesize,
    synthesize_gradient,
    zeroth_coefficient,
)

__all__ = ["FourierSourceReconstructor"]


class FourierSourceReconstructor(BaseEstimator):
    """Reconstruct a source field from multi-wavenumber boundary traces.

    Parameters
    ----------
    period : float
        Side of the square containing the source support.
    truncation : int
        Half-width of the mode box (modes ``1 <= |l|_inf <= truncation``).
    lambda_zero : float
        Offset of the zero-mode surrogate; ``(2 pi / period) * lambda_zero``
        must stay below 1/2.
    lift_radius : float
        Radius of the circle the measured data is continued to.
    mode_cutoff : int
        Angular mode cutoff of the outward continuation.
    out_angle_count : int
        Sample count on the lifted circle.
    delta, seed, lap_scale
        Optional measurement perturbation applied to the traces in
        ``fit`` (``delta=0`` leaves them untouched).
    k_scale : float, optional
        Override of the wavenumber scale (default ``2 pi / period``).

    Attributes
    ----------
    coefficients_ : CoefficientTable
    wavenumbers_ : WavenumberTable
    """

    def __init__(
        self,
        period: float = 1.0,
        truncation: int = 10,
        lambda_zero: float = 1e-3,
        lift_radius: float = 2.0,
        mode_cutoff: int = 60,
        out_angle_count: int = 200,
        delta: float = 0.0,
        seed: int = 0,
        lap_scale: str = "lap_u",
        k_scale: float | None = None,
    ):
        self.period = period
        self.truncation = truncation
        self.lambda_zero = lambda_zero
        self.lift_radius = lift_radius
        self.mode_cutoff = mode_cutoff
        self.out_angle_count = out_angle_count
        self.delta = delta
        self.seed = seed
        self.lap_scale = lap_scale
        self.k_scale = k_scale

    def _validate_traces(self, X):
        traces = list(X)
        if not traces:
            raise ValueError("no traces supplied")
        if not all(isinstance(t, CauchyTrace) for t in traces):
            raise TypeError("X must be an iterable of CauchyTrace")
        radii = {t.circle.radius for t in traces}
        if len(radii) > 1:
            raise ValueError("all traces must share one measurement circle radius")
        base_radius = radii.pop()
        if self.lift_radius < base_radius:
            raise ValueError("lift_radius must be at least the measurement radius")
        if self.lap_scale not in LAP_SCALES:
            raise ValueError(f"lap_scale must be one of {LAP_SCALES}")
        return traces, base_radius

    def fit(self, X, y=None):
        """Extract every mode coefficient from the traces in ``X``.

        ``X`` is an iterable of measured traces; each distinct wavenumber
        of the admissible set (including the zero-mode surrogate) must be
        covered by exactly one trace.
        """
        traces, _ = self._validate_traces(X)
        table = admissible_wavenumbers(
            self.truncation, self.period, self.lambda_zero, self.k_scale
        )
        by_k = {}
        for t in traces:
            by_k[round(float(t.wavenumber), 12)] = t
        out_circle = make_circle_grid(self.lift_radius, self.out_angle_count)
        coeffs = CoefficientTable(
            period=self.period, truncation=self.truncation, lambda_zero=self.lambda_zero
        )
        noise = NoiseParams(delta=self.delta, seed=self.seed) if self.delta > 0 else None
        zero_data = None
        for key, k, modes in table.distinct:
            trace = by_k.get(round(float(k), 12))
            if trace is None:
                raise ValueError(f"missing trace for wavenumber {k} (group {key})")
            if noise is not None:
                trace = perturb_trace(trace, noise, lap_scale=self.lap_scale)
            lifted = lift_trace(trace, self.lift_radius, out_circle, self.mode_cutoff)
            if key == ZERO_MODE_KEY:
                zero_data = lifted
                continue
            for l in modes:
                coeffs.set_mode(
                    int(l.l1),
                    int(l.l2),
                    fourier_coefficient(l, lifted, self.period, self.k_scale),
                )
        coeffs.set_zero_mode(
            zeroth_coefficient(zero_data, coeffs, self.lambda_zero, self.period, self.k_scale)
        )
        self.coefficients_ = coeffs
        self.wavenumbers_ = table
        return self

    def _check_fitted(self):
        if not hasattr(self, "coefficients_"):
            raise NotFittedError("call fit before predict")

    def predict(self, X) -> np.ndarray:
        """Evaluate the reconstruction on a grid (flat, complex)."""
        self._check_fitted()
        if not isinstance(X, CartesianGrid):
            raise TypeError("X must be a CartesianGrid")
        return synthesize(self.coefficients_, X)

    def predict_gradient(self, X):
        self._check_fitted()
        if not isinstance(X, CartesianGrid):
            raise TypeError("X must be a CartesianGrid")
        return synthesize_gradient(self.coefficients_, X)

    def evaluation_grid(self, points_per_side: int) -> CartesianGrid:
        """Convenience: cell-centered evaluation grid over the period square."""
        return make_cartesian_grid(self.period, points_per_side)
