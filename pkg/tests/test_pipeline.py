"""Experiment harness and CLI: configs, file schemas, caching, determinism."""

import json
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from platesource import io
from platesource.cli import main, parse_config_file
from platesource.experiment import (
    ExperimentConfig,
    example_config,
    run_pipeline,
    run_reconstruct,
    run_simulate,
    run_table,
)
from platesource.metrics import rel_l2


def tiny_config(out, **overrides):
    base = dict(
        source="s1",
        truncation=1,
        delta=0.1,
        seed=7,
        n_measure=40,
        out_angle_count=48,
        quad_points_per_side=41,
        eval_points_per_side=21,
        mode_cutoff=30,
        output_dir=str(out),
    )
    base.update(overrides)
    return ExperimentConfig(**base)


class TestConfig:
    def test_geometry_validation(self):
        with pytest.raises(ValueError):
            ExperimentConfig(radius=0.7)  # inside the unit square's diagonal
        with pytest.raises(ValueError):
            ExperimentConfig(lift_radius=0.75)
        with pytest.raises(ValueError):
            ExperimentConfig(lambda_zero=0.2)
        with pytest.raises(ValueError):
            ExperimentConfig(theta_max=7.0)
        with pytest.raises(ValueError):
            ExperimentConfig(delta=1.0)
        with pytest.raises(ValueError):
            ExperimentConfig(truncation="sometimes")

    def test_truncation_resolution(self):
        assert ExperimentConfig(delta=0.1).resolve_truncation() == 10
        assert ExperimentConfig(delta=0.1, truncation="alt").resolve_truncation() == 6
        assert ExperimentConfig(truncation=4).resolve_truncation() == 4
        with pytest.raises(ValueError):
            ExperimentConfig(delta=0.0).resolve_truncation()

    def test_example_presets(self):
        c1 = example_config(1)
        assert (c1.source, c1.a, c1.radius, c1.lift_radius) == ("s1", 1.0, 0.8, 2.0)
        assert c1.n_measure == 200 and c1.mode_cutoff == 60
        c3 = example_config(3)
        assert (c3.source, c3.a, c3.radius, c3.lift_radius) == ("s3", 6.0, 5.0, 6.0)
        with pytest.raises(ValueError):
            example_config(4)

    def test_data_hash_ignores_reconstruction_knobs(self):
        a = tiny_config("x")
        assert a.data_hash() == replace(a, delta=0.3, seed=1, eval_points_per_side=31).data_hash()
        assert a.data_hash() != replace(a, quad_points_per_side=51).data_hash()

    def test_config_file_parsing(self, tmp_path):
        p = tmp_path / "run.cfg"
        p.write_text(
            "# experiment\nsource = s2\na = 1.0\ndelta = 0.05\ntruncation = default\n"
            "k_scale = none\nseed = 11\nquad_points_per_side = 41\n"
        )
        d = parse_config_file(p)
        assert d == {
            "source": "s2", "a": 1.0, "delta": 0.05, "truncation": "default",
            "k_scale": None, "seed": 11, "quad_points_per_side": 41,
        }
        bad = tmp_path / "bad.cfg"
        bad.write_text("nonsense_key = 3\n")
        with pytest.raises(ValueError):
            parse_config_file(bad)


class TestSimulate:
    def test_smoke_run_writes_distinct_wavenumbers(self, tmp_path):
        cfg = tiny_config(tmp_path / "run")
        manifest = run_simulate(cfg)
        # box half-width 1: wavenumber groups {1, 2} plus the surrogate
        assert len(manifest["entries"]) == 3
        groups = {e["group"] for e in manifest["entries"]}
        assert groups == {"l0", 1, 2}
        for e in manifest["entries"]:
            assert (cfg.data_dir() / e["file"]).exists()

    def test_rerun_is_byte_identical(self, tmp_path):
        cfg = tiny_config(tmp_path / "run")
        run_simulate(cfg)
        files = sorted(cfg.data_dir().glob("trace_*.csv")) + [cfg.data_dir() / "manifest.json"]
        first = {f.name: f.read_bytes() for f in files}
        run_simulate(cfg)
        for f in files:
            assert f.read_bytes() == first[f.name], f.name

    def test_trace_roundtrip(self, tmp_path):
        cfg = tiny_config(tmp_path / "run")
        run_simulate(cfg)
        path = next(cfg.data_dir().glob("trace_*.csv"))
        trace, meta = io.read_trace_csv(path)
        assert trace.circle.angle_count == cfg.n_measure
        assert meta["data_hash"] == cfg.data_hash()


class TestReconstruct:
    def test_requires_simulated_data(self, tmp_path):
        cfg = tiny_config(tmp_path / "run")
        with pytest.raises(FileNotFoundError):
            run_reconstruct(cfg)

    def test_end_to_end_outputs(self, tmp_path):
        cfg = tiny_config(tmp_path / "run")
        run_simulate(cfg)
        res = run_reconstruct(cfg)
        out = Path(cfg.output_dir)
        assert (out / "grid.csv").exists()
        assert (out / "coefficients.csv").exists()
        report = io.read_json(out / "report.json")
        assert report["N_used"] == 1 and report["delta"] == 0.1
        assert "wall_time" not in json.dumps(report)  # timings live elsewhere
        assert (out / "timings.json").exists()
        grid, recon, exact, meta = io.read_grid_csv(out / "grid.csv")
        np.testing.assert_allclose(recon, res.recon, rtol=1e-15)
        coeffs, _ = io.read_coefficients_csv(out / "coefficients.csv")
        np.testing.assert_allclose(coeffs.values, res.coefficients.values, rtol=1e-15)

    def test_stale_hash_rejected(self, tmp_path):
        cfg = tiny_config(tmp_path / "run")
        run_simulate(cfg)
        with pytest.raises(io.SchemaError):
            run_reconstruct(replace(cfg, quad_points_per_side=61))

    def test_schema_version_checked(self, tmp_path):
        cfg = tiny_config(tmp_path / "run")
        run_simulate(cfg)
        path = next(cfg.data_dir().glob("trace_*.csv"))
        lines = path.read_text().splitlines()
        header = json.loads(lines[0][2:])
        header["schema"] = 999
        lines[0] = "# " + json.dumps(header)
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(io.SchemaError):
            run_reconstruct(cfg)

    def test_mismatched_quadrature_mode(self, tmp_path):
        # simulate finer than the inversion's nominal grid (decoupled knobs)
        cfg = tiny_config(tmp_path / "run", quad_points_per_side=81, eval_points_per_side=41)
        run_simulate(cfg)
        res = run_reconstruct(cfg)
        assert res.report.rel_l2 < 1.0


class TestPipelineAndCache:
    def test_warm_run_reuses_data(self, tmp_path):
        cfg = tiny_config(tmp_path / "run")
        r1 = run_pipeline(cfg)
        stamp = {p.name: p.stat().st_mtime_ns for p in cfg.data_dir().glob("trace_*.csv")}
        r2 = run_pipeline(cfg)
        assert {p.name: p.stat().st_mtime_ns for p in cfg.data_dir().glob("trace_*.csv")} == stamp
        assert r1.report.rel_l2 == r2.report.rel_l2

    def test_delta_change_keeps_cache(self, tmp_path):
        cfg = tiny_config(tmp_path / "run")
        run_pipeline(cfg)
        stamp = {p.name: p.stat().st_mtime_ns for p in cfg.data_dir().glob("trace_*.csv")}
        run_pipeline(replace(cfg, delta=0.2))
        assert {p.name: p.stat().st_mtime_ns for p in cfg.data_dir().glob("trace_*.csv")} == stamp

    def test_geometry_change_invalidates_cache(self, tmp_path):
        cfg = tiny_config(tmp_path / "run")
        run_pipeline(cfg)
        with pytest.warns(UserWarning, match="regenerating"):
            run_pipeline(replace(cfg, quad_points_per_side=31))

    def test_larger_truncation_extends_cache(self, tmp_path):
        cfg = tiny_config(tmp_path / "run", truncation=2)
        run_simulate(cfg)
        sub = replace(cfg, truncation=1)
        res = run_reconstruct(sub)  # subset of wavenumbers available
        assert res.report.N_used == 1


class TestTable:
    def test_single_row_equals_reconstruct(self, tmp_path):
        cfg = tiny_config(tmp_path / "run")
        rows = run_table(cfg, [0.1])
        direct = run_reconstruct(replace(cfg, delta=0.1))
        assert rows[0]["rel_l2"] == pytest.approx(direct.report.rel_l2, rel=1e-12)
        assert (Path(cfg.output_dir) / "table.csv").exists()
        assert (Path(cfg.output_dir) / "table.txt").exists()

    def test_sweep_shares_dataset(self, tmp_path):
        cfg = tiny_config(tmp_path / "run")
        rows = run_table(cfg, [0.1, 0.2])
        assert [r["delta"] for r in rows] == [0.1, 0.2]
        # one dataset at the sweep root, symlinked into each member
        assert (Path(cfg.output_dir) / "data" / "manifest.json").exists()


class TestDedupEquivalence:
    def test_shared_wavenumber_traces_give_identical_modes(self, tmp_path):
        # modes sharing one wavenumber are extracted from one lifted trace;
        # feeding per-mode duplicates through a fresh lift changes nothing
        from platesource.core import make_cartesian_grid, make_circle_grid
        from platesource.forward import radiate_trace
        from platesource.lift import lift_trace
        from platesource.recon import admissible_wavenumbers, fourier_coefficient
        from platesource.sources import SourceSpec

        cfg = tiny_config(tmp_path / "run")
        spec = SourceSpec("s1")
        quad = make_cartesian_grid(1.0, 41)
        inner = make_circle_grid(0.8, 40)
        outer = make_circle_grid(2.0, 48)
        table = admissible_wavenumbers(1, 1.0, 1e-3)
        for key, k, modes in table.distinct:
            if key == "l0":
                continue
            shared = lift_trace(radiate_trace(spec, k, inner, quad), 2.0, outer, 30)
            for l in modes:
                redundant = lift_trace(radiate_trace(spec, k, inner, quad), 2.0, outer, 30)
                a = fourier_coefficient(l, shared, 1.0)
                b = fourier_coefficient(l, redundant, 1.0)
                assert abs(a - b) <= 1e-12 * max(abs(a), 1e-30)


class TestCli:
    def test_pipeline_command(self, tmp_path, capsys):
        cfgfile = tmp_path / "run.cfg"
        cfgfile.write_text(
            "source = s1\ntruncation = 1\ndelta = 0.1\nn_measure = 40\n"
            "out_angle_count = 48\nquad_points_per_side = 41\n"
            "eval_points_per_side = 21\nmode_cutoff = 30\n"
            f"output_dir = {tmp_path / 'out'}\n"
        )
        assert main(["pipeline", "--config", str(cfgfile)]) == 0
        out = capsys.readouterr().out
        assert "rel_l2" in out
        assert (tmp_path / "out" / "report.json").exists()

    def test_flag_overrides(self, tmp_path, capsys):
        cfgfile = tmp_path / "run.cfg"
        cfgfile.write_text(
            "source = s1\ntruncation = 1\nn_measure = 40\nout_angle_count = 48\n"
            "quad_points_per_side = 41\neval_points_per_side = 21\nmode_cutoff = 30\n"
        )
        rc = main([
            "pipeline", "--config", str(cfgfile), "--out", str(tmp_path / "o2"),
            "--delta", "0.2", "--seed", "3",
        ])
        assert rc == 0
        report = io.read_json(tmp_path / "o2" / "report.json")
        assert report["delta"] == 0.2 and report["config"]["seed"] == 3

    def test_error_is_machine_readable(self, tmp_path, capsys):
        rc = main(["reconstruct", "--out", str(tmp_path / "nope")])
        assert rc == 1
        err = capsys.readouterr().err
        payload = json.loads(err)
        assert payload["error"] == "FileNotFoundError"

    def test_table_command(self, tmp_path, capsys):
        cfgfile = tmp_path / "run.cfg"
        cfgfile.write_text(
            "source = s1\ntruncation = 1\ndelta = 0.1\nn_measure = 40\n"
            "out_angle_count = 48\nquad_points_per_side = 41\n"
            "eval_points_per_side = 21\nmode_cutoff = 30\n"
            f"output_dir = {tmp_path / 'out'}\n"
        )
        assert main(["table", "--config", str(cfgfile), "--deltas", "0.1,0.2"]) == 0
        assert "rel L2" in capsys.readouterr().out

    def test_zero_field_scoring_raises_defined_error(self):
        with pytest.raises(ZeroDivisionError):
            rel_l2(np.ones(4), np.zeros(4))
