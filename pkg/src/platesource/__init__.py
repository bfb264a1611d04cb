"""Source reconstruction for flexural plate waves from boundary data.

The pipeline: simulate boundary traces of the radiated field at the
admissible wavenumbers (:mod:`platesource.forward`), optionally perturb
them (:mod:`platesource.noise`), continue the measured data outward to a
larger circle where full Cauchy data becomes available
(:mod:`platesource.lift`), extract mode coefficients and synthesize the
source (:mod:`platesource.recon`), and score the result
(:mod:`platesource.metrics`). :class:`FourierSourceReconstructor` wraps
the inversion behind a scikit-learn style fit/predict interface, and
:mod:`platesource.experiment` drives full config-based runs.
"""

from .core import (
    CartesianGrid,
    CauchyTrace,
    CircleGrid,
    ModeIndex,
    fourier_basis,
    make_cartesian_grid,
    make_circle_grid,
)
from .estimator import FourierSourceReconstructor
from .experiment import (
    ExperimentConfig,
    ReconstructionResult,
    example_config,
    run_pipeline,
    run_reconstruct,
    run_simulate,
    run_table,
)
from .metrics import ErrorReport, rel_h1, rel_l2
from .noise import NoiseParams, perturb_trace
from .recon import (
    CoefficientTable,
    WavenumberTable,
    admissible_wavenumbers,
    basis_overlap,
    fourier_coefficient,
    synthesize,
    synthesize_gradient,
    truncation_order,
    zeroth_coefficient,
)
from .sources import SourceSpec, eval_source, sample

__version__ = "0.1.0"

__all__ = [
    "CartesianGrid",
    "CauchyTrace",
    "CircleGrid",
    "CoefficientTable",
    "ErrorReport",
    "ExperimentConfig",
    "FourierSourceReconstructor",
    "ModeIndex",
    "NoiseParams",
    "ReconstructionResult",
    "SourceSpec",
    "WavenumberTable",
    "admissible_wavenumbers",
    "basis_overlap",
    "eval_source",
    "example_config",
    "fourier_basis",
    "fourier_coefficient",
    "make_cartesian_grid",
    "make_circle_grid",
    "perturb_trace",
    "rel_h1",
    "rel_l2",
    "run_pipeline",
    "run_reconstruct",
    "run_simulate",
    "run_table",
    "sample",
    "synthesize",
    "synthesize_gradient",
    "truncation_order",
    "zeroth_coefficient",
]
