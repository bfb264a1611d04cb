"""Produce real (downsized) experiment outputs through the upstream CLI.

The figure package consumes only files, so the fixtures shell out to the
`platesource` command-line interface rather than importing it.
"""

import subprocess
import sys
from pathlib import Path

import pytest

_EXAMPLE_CONFIGS = {
    1: """
source = s1
a = 1.0
radius = 0.8
lift_radius = 2.0
truncation = 3
delta = 0.1
seed = 1
n_measure = 60
out_angle_count = 64
mode_cutoff = 40
quad_points_per_side = 61
eval_points_per_side = 81
""",
    2: """
source = s2
a = 1.0
radius = 0.8
lift_radius = 2.0
truncation = 3
delta = 0.1
seed = 1
n_measure = 60
out_angle_count = 64
mode_cutoff = 40
quad_points_per_side = 61
eval_points_per_side = 81
""",
    3: """
source = s3
a = 6.0
radius = 5.0
lift_radius = 6.0
truncation = 3
delta = 0.1
seed = 1
n_measure = 60
out_angle_count = 64
mode_cutoff = 40
quad_points_per_side = 61
eval_points_per_side = 81
""",
}


@pytest.fixture(scope="session")
def example_outputs(tmp_path_factory):
    """Run the upstream pipeline once per example; map id -> output dir."""
    outputs = {}
    for example_id, cfg_text in _EXAMPLE_CONFIGS.items():
        root = tmp_path_factory.mktemp(f"example{example_id}")
        cfg = root / "run.cfg"
        out = root / "out"
        cfg.write_text(cfg_text.strip() + f"\noutput_dir = {out}\n")
        proc = subprocess.run(
            [sys.executable, "-m", "platesource.cli", "pipeline", "--config", str(cfg)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        assert (out / "grid.csv").exists()
        outputs[example_id] = out
    return outputs
