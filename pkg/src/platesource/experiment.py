"""Config-driven experiment harness: simulate, perturb, lift, invert, score.

``run_simulate`` writes one trace file per distinct wavenumber of the
admissible set (many modes share a wavenumber, so files are deduplicated)
plus a manifest keyed by a hash of the data-affecting configuration.
``run_reconstruct`` replays those files through noise, lifting, and
coefficient extraction, then synthesizes and scores the reconstruction.
``run_pipeline`` chains the two, reusing cached data whose manifest hash
matches. ``run_table`` sweeps noise levels against one cached dataset.

Reports are deterministic for a fixed (config, seed); wall-clock timings
are written to a separate ``timings.json`` so reruns produce byte-equal
reports and data files.
"""

from __future__ import annotations

import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import io
from .core import CartesianGrid, make_cartesian_grid, make_circle_grid
from .estimator import FourierSourceReconstructor
from .metrics import ErrorReport, grid_gradient, rel_h1, rel_l2
from .recon import WavenumberTable, admissible_wavenumbers, truncation_order
from .forward import radiate_trace
from .sources import SourceSpec, sample

__all__ = [
    "ExperimentConfig",
    "ReconstructionResult",
    "example_config",
    "run_simulate",
    "run_reconstruct",
    "run_pipeline",
    "run_table",
]

_SMOOTH_VARIANTS = ("s1", "s3")


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one experiment run.

    ``truncation`` is either an explicit integer mode-box half-width or
    the name of a rule ("default" or "alt") applied to ``delta``.
    ``noise_scale_lap`` selects the magnitude the Laplacian-trace noise is
    proportional to; the literal formulation scales by ``|u|``, which at
    the near-zero surrogate wavenumber swamps the Laplacian data (|u|
    grows like 1/k^2 there), so experiment configs default to ``lap_u``.
    """

    source: str = "s1"
    a: float = 1.0
    radius: float = 0.8
    lift_radius: float = 2.0
    n_measure: int = 200
    theta_max: float = 2.0 * np.pi
    out_angle_count: int = 200
    lambda_zero: float = 1e-3
    mode_cutoff: int = 60
    delta: float = 0.1
    seed: int = 0
    truncation: int | str = "default"
    quad_points_per_side: int = 201
    eval_points_per_side: int = 201
    k_scale: float | None = None
    noise_scale_lap: str = "lap_u"
    output_dir: str = "out"

    def __post_init__(self):
        half_diag = self.a * np.sqrt(2.0) / 2.0
        if not self.lift_radius >= self.radius > half_diag:
            raise ValueError(
                "geometry must satisfy lift_radius >= radius > a*sqrt(2)/2"
            )
        if not 0.0 < (2.0 * np.pi / self.a) * self.lambda_zero < 0.5:
            raise ValueError("lambda_zero must satisfy 0 < (2 pi / a) lambda < 1/2")
        if not 0.0 < self.theta_max <= 2.0 * np.pi + 1e-12:
            raise ValueError("theta_max must lie in (0, 2 pi]")
        if not 0.0 <= self.delta < 1.0:
            raise ValueError("delta must lie in [0, 1)")
        if isinstance(self.truncation, str):
            if self.truncation not in ("default", "alt"):
                raise ValueError("truncation must be 'default', 'alt', or an integer")
        elif int(self.truncation) < 1:
            raise ValueError("explicit truncation must be at least 1")
        if self.noise_scale_lap not in ("u", "lap_u"):
            raise ValueError("noise_scale_lap must be 'u' or 'lap_u'")

    def resolve_truncation(self) -> int:
        if isinstance(self.truncation, str):
            return truncation_order(self.delta, rule=self.truncation)
        return int(self.truncation)

    def source_spec(self) -> SourceSpec:
        return SourceSpec(variant=self.source)

    def wavenumber_table(self) -> WavenumberTable:
        return admissible_wavenumbers(
            self.resolve_truncation(), self.a, self.lambda_zero, self.k_scale
        )

    def data_dir(self) -> Path:
        return Path(self.output_dir) / "data"

    def data_payload(self) -> dict:
        """The configuration subset that determines the simulated data."""
        return {
            "source": self.source,
            "a": self.a,
            "radius": self.radius,
            "n_measure": self.n_measure,
            "theta_max": self.theta_max,
            "lambda_zero": self.lambda_zero,
            "quad_points_per_side": self.quad_points_per_side,
            "k_scale": self.k_scale,
        }

    def data_hash(self) -> str:
        return io.config_hash(self.data_payload())

    def to_dict(self) -> dict:
        return asdict(self)


_EXAMPLES = {
    1: dict(source="s1", a=1.0, radius=0.8, lift_radius=2.0),
    2: dict(source="s2", a=1.0, radius=0.8, lift_radius=2.0),
    3: dict(source="s3", a=6.0, radius=5.0, lift_radius=6.0),
}


def example_config(example: int, **overrides) -> ExperimentConfig:
    """Preset configuration for one of the three reference experiments.

    All share N_m = 200 measurement angles, 200 lifted angles, offset
    1e-3, mode cutoff 60, 201^2 quadrature and evaluation grids, and a
    default noise level of 10%.
    """
    if example not in _EXAMPLES:
        raise ValueError("example must be 1, 2, or 3")
    base = dict(_EXAMPLES[example])
    base.update(overrides)
    return ExperimentConfig(**base)


@dataclass(frozen=True)
class ReconstructionResult:
    config: ExperimentConfig
    report: ErrorReport
    recon: np.ndarray = field(repr=False, default=None)
    exact: np.ndarray = field(repr=False, default=None)
    coefficients: object = field(repr=False, default=None)
    grid: CartesianGrid = field(repr=False, default=None)
    paths: dict = field(default_factory=dict)


def _trace_filename(index: int) -> str:
    return f"trace_{index:04d}.csv"


def _simulate_one(args):
    cfg_dict, key, k = args
    cfg = ExperimentConfig(**cfg_dict)
    circle = make_circle_grid(cfg.radius, cfg.n_measure, cfg.theta_max)
    quad = make_cartesian_grid(cfg.a, cfg.quad_points_per_side)
    trace = radiate_trace(cfg.source_spec(), k, circle, quad, needs=("u", "lap_u"))
    return key, trace


def run_simulate(cfg: ExperimentConfig, workers: int = 1) -> dict:
    """Generate and write measured traces for every distinct wavenumber.

    Returns the manifest dictionary (also written to ``data/manifest.json``).
    Traces carry only the measured fields (u, lap_u); noise is applied at
    reconstruction time so one dataset serves every noise level.
    """
    table = cfg.wavenumber_table()
    data_dir = cfg.data_dir()
    data_dir.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    jobs = [(cfg.to_dict(), key, k) for key, k, _ in table.distinct]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_simulate_one, jobs, chunksize=4))
    else:
        results = [_simulate_one(j) for j in jobs]
    entries = []
    by_key = dict(results)
    for index, (key, k, modes) in enumerate(table.distinct):
        trace = by_key[key]
        fname = _trace_filename(index)
        io.write_trace_csv(
            data_dir / fname,
            trace,
            meta={
                "data_hash": cfg.data_hash(),
                "group": key if key == "l0" else int(key),
                "modes": [[int(m.l1), int(m.l2)] for m in modes] if key != "l0" else [],
                "seed": cfg.seed,
            },
        )
        entries.append({"file": fname, "group": key if key == "l0" else int(key),
                        "wavenumber": float(k)})
    manifest = {
        "schema": io.SCHEMA_VERSION,
        "data_hash": cfg.data_hash(),
        "data_config": cfg.data_payload(),
        "entries": entries,
    }
    io.write_json(data_dir / "manifest.json", manifest)
    elapsed = time.perf_counter() - t0
    io.write_json(data_dir / "timings.json", {"simulate_s": round(elapsed, 3)})
    return manifest


def _load_traces(cfg: ExperimentConfig, table: WavenumberTable) -> dict:
    data_dir = cfg.data_dir()
    manifest_path = data_dir / "manifest.json"
    if not manifest_path.exists():
        raise FileNotFoundError(f"no manifest at {manifest_path}; run simulate first")
    manifest = io.read_json(manifest_path)
    if manifest.get("data_hash") != cfg.data_hash():
        raise io.SchemaError(
            "data directory was generated with a different configuration "
            f"({manifest.get('data_hash')} != {cfg.data_hash()})"
        )
    by_group = {e["group"]: e for e in manifest["entries"]}
    traces = {}
    for key, k, _ in table.distinct:
        gk = key if key == "l0" else int(key)
        if gk not in by_group:
            raise FileNotFoundError(f"data files do not cover wavenumber group {key}")
        trace, meta = io.read_trace_csv(data_dir / by_group[gk]["file"])
        if meta.get("data_hash") != cfg.data_hash():
            raise io.SchemaError(f"trace {by_group[gk]['file']} has a stale data hash")
        traces[key] = trace
    return traces


def run_reconstruct(cfg: ExperimentConfig) -> ReconstructionResult:
    """Reconstruct from previously simulated data and write all outputs."""
    N = cfg.resolve_truncation()
    table = cfg.wavenumber_table()
    traces = _load_traces(cfg, table)
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    t0 = time.perf_counter()
    est = FourierSourceReconstructor(
        period=cfg.a,
        truncation=N,
        lambda_zero=cfg.lambda_zero,
        lift_radius=cfg.lift_radius,
        mode_cutoff=cfg.mode_cutoff,
        out_angle_count=cfg.out_angle_count,
        delta=cfg.delta,
        seed=cfg.seed,
        lap_scale=cfg.noise_scale_lap,
        k_scale=cfg.k_scale,
    )
    est.fit(traces.values())
    grid = make_cartesian_grid(cfg.a, cfg.eval_points_per_side)
    recon = est.predict(grid)
    exact = sample(cfg.source_spec(), grid)
    err_l2 = rel_l2(recon, exact)
    err_h1 = None
    if cfg.source in _SMOOTH_VARIANTS:
        err_h1 = rel_h1(recon, est.predict_gradient(grid), exact, grid)
    elapsed = time.perf_counter() - t0

    report = ErrorReport(
        rel_l2=err_l2, rel_h1=err_h1, N_used=N, delta=cfg.delta, wall_time_s=elapsed
    )
    paths = {
        "grid": out_dir / "grid.csv",
        "coefficients": out_dir / "coefficients.csv",
        "report": out_dir / "report.json",
        "timings": out_dir / "timings.json",
    }
    meta = {"data_hash": cfg.data_hash(), "delta": cfg.delta, "seed": cfg.seed, "N": N}
    io.write_grid_csv(paths["grid"], grid, recon, exact, meta)
    io.write_coefficients_csv(paths["coefficients"], est.coefficients_, meta)
    # the config echo describes the experiment; its disk location does not
    # belong in it (identical runs must produce identical reports)
    echo = _jsonable(cfg.to_dict())
    echo.pop("output_dir")
    report_payload = {
        "schema": io.SCHEMA_VERSION,
        "config": echo,
        "N_used": N,
        "delta": cfg.delta,
        "errors": {"rel_l2": err_l2, "rel_h1": err_h1},
        "data_hash": cfg.data_hash(),
        # extrema pin downstream color scales independently of rerenders
        "field_range": {
            "recon_min": float(recon.real.min()),
            "recon_max": float(recon.real.max()),
            "exact_min": float(exact.min()),
            "exact_max": float(exact.max()),
            "abs_err_max": float(np.abs(recon - exact).max()),
        },
    }
    io.write_json(paths["report"], report_payload)
    io.write_json(paths["timings"], {"reconstruct_s": round(elapsed, 3)})
    return ReconstructionResult(
        config=cfg,
        report=report,
        recon=recon,
        exact=exact,
        coefficients=est.coefficients_,
        grid=grid,
        paths={k: str(v) for k, v in paths.items()},
    )


def _jsonable(d: dict) -> dict:
    return {k: (v if v is None or isinstance(v, (int, float, str, bool)) else float(v))
            for k, v in d.items()}


def _cache_ready(cfg: ExperimentConfig) -> bool:
    manifest_path = cfg.data_dir() / "manifest.json"
    if not manifest_path.exists():
        return False
    try:
        manifest = io.read_json(manifest_path)
    except Exception:
        return False
    if manifest.get("data_hash") != cfg.data_hash():
        return False
    have = {e["group"] for e in manifest["entries"]}
    need = {key if key == "l0" else int(key) for key, _, _ in cfg.wavenumber_table().distinct}
    return need.issubset(have)


def run_pipeline(cfg: ExperimentConfig, workers: int = 1) -> ReconstructionResult:
    """Simulate (or reuse cached data) and reconstruct in one call."""
    if not _cache_ready(cfg):
        if (cfg.data_dir() / "manifest.json").exists():
            warnings.warn("cached data does not match the configuration; regenerating")
        run_simulate(cfg, workers=workers)
    return run_reconstruct(cfg)


def run_table(cfg: ExperimentConfig, deltas, workers: int = 1) -> list[dict]:
    """Noise-level sweep sharing one dataset; writes table.csv and table.txt.

    The dataset is generated once at the largest mode box the sweep
    needs, so every reconstruction finds all of its wavenumbers.
    """
    deltas = list(deltas)
    if not deltas:
        raise ValueError("deltas must be nonempty")
    configs = [replace(cfg, delta=d) for d in deltas]
    n_max = max(c.resolve_truncation() for c in configs)
    data_cfg = replace(cfg, delta=deltas[0], truncation=n_max)
    if not _cache_ready(data_cfg):
        run_simulate(data_cfg, workers=workers)
    rows = []
    for c in configs:
        sub = replace(c, output_dir=str(Path(cfg.output_dir) / f"delta_{c.delta:g}"))
        # reuse the shared dataset
        sub_result = run_reconstruct(_with_data_dir(sub, cfg))
        rows.append(
            {
                "delta": c.delta,
                "N": sub_result.report.N_used,
                "rel_l2": sub_result.report.rel_l2,
                "rel_h1": sub_result.report.rel_h1,
                "time_s": sub_result.report.wall_time_s,
            }
        )
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    header = ["delta", "N", "rel_l2", "rel_h1", "time_s"]
    lines = [",".join(header)]
    for r in rows:
        lines.append(
            ",".join(
                [format(r["delta"], ".17g"), str(r["N"]), format(r["rel_l2"], ".17g"),
                 "" if r["rel_h1"] is None else format(r["rel_h1"], ".17g"),
                 format(r["time_s"], ".3f")]
            )
        )
    (out_dir / "table.csv").write_text("\n".join(lines) + "\n")
    pretty = [
        f"{'delta':>8} {'N':>4} {'rel L2':>10} {'rel H1':>10} {'time [s]':>9}"
    ]
    for r in rows:
        h1 = "-" if r["rel_h1"] is None else f"{r['rel_h1']:.4%}"
        pretty.append(
            f"{r['delta']:>8.4g} {r['N']:>4d} {r['rel_l2']:>10.4%} {h1:>10} {r['time_s']:>9.2f}"
        )
    (out_dir / "table.txt").write_text("\n".join(pretty) + "\n")
    return rows


def _with_data_dir(sub: ExperimentConfig, parent: ExperimentConfig) -> ExperimentConfig:
    """Point a sweep member at the sweep's shared data directory."""
    link = Path(sub.output_dir) / "data"
    src = parent.data_dir().resolve()
    link.parent.mkdir(parents=True, exist_ok=True)
    if not link.exists():
        link.symlink_to(src, target_is_directory=True)
    return sub
