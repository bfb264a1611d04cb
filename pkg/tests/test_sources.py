import numpy as np
import pytest

from platesource.core import make_cartesian_grid
from platesource.sources import (
    SourceSpec,
    analytic_gradient,
    eval_source,
    load_gridded_csv,
    sample,
)

from conftest import gl_volume_integral

S1 = SourceSpec("s1")
S2 = SourceSpec("s2")
S3 = SourceSpec("s3")


class TestPiecewiseDisk:
    def test_inner_plateau(self):
        assert eval_source(S2, (0.0, 0.0)) == 0.8

    def test_annulus(self):
        assert eval_source(S2, (0.25, 0.0)) == 0.3

    def test_outside(self):
        assert eval_source(S2, (0.4, 0.0)) == 0.0

    def test_boundary_conventions(self):
        # inner boundary r^2 = 0.04 belongs to the annulus (strict <)
        assert eval_source(S2, (0.2, 0.0)) == 0.3
        assert eval_source(S2, (0.2 - 1e-9, 0.0)) == 0.8
        # outer boundary r^2 = 0.09 is inclusive
        assert eval_source(S2, (0.3, 0.0)) == 0.3
        assert eval_source(S2, (0.3 + 1e-9, 0.0)) == 0.0

    def test_sampled_value_set(self):
        vals = set(np.unique(sample(S2, make_cartesian_grid(1.0, 201))))
        assert vals <= {0.0, 0.3, 0.8}

    def test_disk_area_integral(self):
        g = make_cartesian_grid(1.0, 201)
        got = np.sum(sample(S2, g)) * g.spacing**2
        want = np.pi * (0.8 * 0.04 + 0.3 * 0.05)  # 0.14765485471872028
        assert got == pytest.approx(want, rel=0.02)


class TestSmoothSources:
    def test_s1_frozen_point_value(self):
        # peak of the first bump; multiprecision-evaluated reference
        assert eval_source(S1, (0.01, 0.12)) == pytest.approx(0.71222327488479219, rel=1e-12)

    def test_s1_boundary_decay(self):
        g = make_cartesian_grid(1.0, 201)
        f = np.abs(sample(S1, g).reshape(201, 201))
        ring = np.concatenate([f[0], f[-1], f[:, 0], f[:, -1]])
        assert ring.max() < 1e-3 * f.max()

    def test_s3_boundary_decay(self):
        # the fifth-power tail leaves ~4e-2 relative mass on the boundary
        # ring of the period-6 square; bound frozen from measurement
        g = make_cartesian_grid(6.0, 201)
        f = np.abs(sample(S3, g).reshape(201, 201))
        ring = np.concatenate([f[0], f[-1], f[:, 0], f[:, -1]])
        assert ring.max() < 0.05 * f.max()

    def test_determinism_and_purity(self):
        g = make_cartesian_grid(1.0, 41)
        assert np.array_equal(sample(S1, g), sample(S1, g))

    @pytest.mark.parametrize("spec,a", [(S1, 1.0), (S3, 6.0)])
    def test_analytic_gradient_matches_finite_differences(self, spec, a):
        g = make_cartesian_grid(a, 401)
        d1, d2 = analytic_gradient(spec, g)
        f = sample(spec, g).reshape(401, 401)
        g1, g2 = np.gradient(f, g.spacing, edge_order=2)
        scale = np.abs(d1).max() + np.abs(d2).max()
        assert np.abs(d1.reshape(401, 401) - g1).max() < 2e-3 * scale
        assert np.abs(d2.reshape(401, 401) - g2).max() < 2e-3 * scale

    def test_gl_integral_agrees_with_midpoint(self):
        # independent quadrature cross-check of the sampled sum
        g = make_cartesian_grid(1.0, 201)
        mid = np.sum(sample(S1, g)) * g.spacing**2
        gl = gl_volume_integral(lambda x1, x2: eval_source(S1, np.stack([x1, x2], -1)), 1.0)
        assert mid == pytest.approx(gl, abs=1e-10)


class TestGridded:
    def test_zero_source_samples_zero(self):
        g = make_cartesian_grid(1.0, 11)
        spec = SourceSpec("gridded", grid=g, values=np.zeros(121))
        assert not np.any(sample(spec, g))

    def test_nearest_lookup_roundtrip(self):
        g = make_cartesian_grid(1.0, 21)
        vals = np.arange(441.0)
        spec = SourceSpec("gridded", grid=g, values=vals)
        np.testing.assert_array_equal(eval_source(spec, g.points), vals)

    def test_rejects_outside_domain(self):
        g = make_cartesian_grid(1.0, 11)
        spec = SourceSpec("gridded", grid=g, values=np.zeros(121))
        with pytest.raises(ValueError):
            eval_source(spec, (0.51, 0.0))

    def test_rejects_mismatched_grid(self):
        g = make_cartesian_grid(1.0, 11)
        spec = SourceSpec("gridded", grid=g, values=np.zeros(121))
        with pytest.raises(ValueError):
            sample(spec, make_cartesian_grid(2.0, 11))

    def test_rejects_bad_shapes(self):
        g = make_cartesian_grid(1.0, 11)
        with pytest.raises(ValueError):
            SourceSpec("gridded", grid=g, values=np.zeros(7))
        with pytest.raises(ValueError):
            SourceSpec("gridded")
        with pytest.raises(ValueError):
            SourceSpec("s9")

    def test_csv_roundtrip(self, tmp_path):
        g = make_cartesian_grid(1.0, 9)
        rng = np.random.default_rng(3)
        vals = rng.normal(size=81)
        lines = ["x1,x2,value"]
        for (x1, x2), v in zip(g.points, vals):
            lines.append(f"{x1:.17g},{x2:.17g},{v:.17g}")
        path = tmp_path / "source.csv"
        path.write_text("\n".join(lines) + "\n")
        spec = load_gridded_csv(path)
        assert spec.grid.points_per_side == 9
        assert spec.grid.side_a == pytest.approx(1.0)
        np.testing.assert_allclose(spec.values, vals)
