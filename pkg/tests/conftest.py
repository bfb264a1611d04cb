"""Shared fixtures and independent quadrature oracles.

The oracles here deliberately avoid the library's own midpoint/rectangle
rules: volume integrals use tensor Gauss-Legendre, so coefficient and
trace checks compare two genuinely different discretizations.
"""

from pathlib import Path

import numpy as np
import pytest

from platesource.core import make_cartesian_grid, make_circle_grid
from platesource.experiment import ExperimentConfig, run_simulate

DATA_DIR = Path(__file__).parent / "data"


def gauss_legendre_nodes(a: float, order: int):
    """Tensor Gauss-Legendre nodes/weights over the square (-a/2, a/2)^2."""
    x, w = np.polynomial.legendre.leggauss(order)
    x = 0.5 * a * x
    w = 0.5 * a * w
    X1, X2 = np.meshgrid(x, x, indexing="ij")
    W = np.outer(w, w)
    return X1.ravel(), X2.ravel(), W.ravel()


def gl_volume_integral(fn, a: float, order: int = 200):
    """Integral of fn(x1, x2) over the square via Gauss-Legendre."""
    x1, x2, w = gauss_legendre_nodes(a, order)
    return np.sum(fn(x1, x2) * w)


def gl_mode_coefficient(fn, l1, l2, a: float, order: int = 200) -> complex:
    """(1/a^2) integral of fn * conj(basis_{l1,l2}) via Gauss-Legendre."""
    kappa = 2.0 * np.pi / a
    return complex(
        gl_volume_integral(
            lambda x1, x2: fn(x1, x2) * np.exp(-1j * kappa * (l1 * x1 + l2 * x2)),
            a,
            order,
        )
        / a**2
    )


@pytest.fixture(scope="session")
def smoke_config(tmp_path_factory):
    """Small but real end-to-end configuration (fast: coarse quadrature)."""
    out = tmp_path_factory.mktemp("smoke")
    return ExperimentConfig(
        source="s1",
        truncation=3,
        delta=0.0,
        quad_points_per_side=81,
        eval_points_per_side=81,
        n_measure=100,
        out_angle_count=100,
        output_dir=str(out),
    )


@pytest.fixture(scope="session")
def smoke_dataset(smoke_config):
    run_simulate(smoke_config)
    return smoke_config


@pytest.fixture(scope="session")
def s1_n20_config(tmp_path_factory):
    """Noise-free S1 dataset large enough for truncations up to 20.

    Generated once per session; the reduced 101^2 quadrature grid keeps
    single-core generation near a minute and is recorded in every report
    that consumes the dataset.
    """
    out = tmp_path_factory.mktemp("s1n20")
    cfg = ExperimentConfig(
        source="s1",
        truncation=20,
        delta=0.0,
        quad_points_per_side=101,
        eval_points_per_side=101,
        output_dir=str(out),
    )
    run_simulate(cfg)
    return cfg


@pytest.fixture(scope="session")
def eval_grid_small():
    return make_cartesian_grid(1.0, 61)


@pytest.fixture(scope="session")
def circle200():
    return make_circle_grid(0.8, 200)
