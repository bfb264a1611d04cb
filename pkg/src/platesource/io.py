"""File schemas shared by the CLI and downstream consumers.

Every CSV starts with one comment line holding a JSON header (schema
version plus file-specific metadata); numbers are written with ``%.17g``
so files round-trip bit-exactly and reruns with identical configuration
produce identical bytes. Reports are JSON with sorted keys; wall-clock
timings live in a separate file so reports stay deterministic.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .core import CartesianGrid, CauchyTrace, make_circle_grid

__all__ = [
    "SCHEMA_VERSION",
    "SchemaError",
    "config_hash",
    "write_trace_csv",
    "read_trace_csv",
    "write_coefficients_csv",
    "read_coefficients_csv",
    "write_grid_csv",
    "read_grid_csv",
    "write_json",
    "read_json",
]

SCHEMA_VERSION = 1


class SchemaError(RuntimeError):
    """A file does not carry the expected schema version or metadata."""


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def config_hash(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _write_with_header(path: Path, meta: dict, columns: list[str], rows) -> None:
    header = dict(meta)
    header["schema"] = SCHEMA_VERSION
    lines = ["# " + json.dumps(header, sort_keys=True, separators=(",", ":"))]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def _read_with_header(path: Path):
    text = Path(path).read_text().splitlines()
    if not text or not text[0].startswith("# "):
        raise SchemaError(f"{path}: missing JSON header line")
    meta = json.loads(text[0][2:])
    if meta.get("schema") != SCHEMA_VERSION:
        raise SchemaError(
            f"{path}: schema version {meta.get('schema')} != {SCHEMA_VERSION}"
        )
    columns = text[1].split(",")
    data = np.array(
        [[float(v) for v in line.split(",")] for line in text[2:] if line],
        dtype=float,
    )
    return meta, columns, data


def write_trace_csv(path, trace: CauchyTrace, meta: dict) -> None:
    meta = dict(meta)
    meta.update(
        wavenumber=float(trace.wavenumber),
        radius=float(trace.circle.radius),
        angle_count=int(trace.circle.angle_count),
        aperture=float(trace.circle.aperture),
    )
    rows = zip(
        trace.circle.angles,
        trace.u.real,
        trace.u.imag,
        trace.lap_u.real,
        trace.lap_u.imag,
    )
    _write_with_header(path, meta, ["theta", "re_u", "im_u", "re_lap_u", "im_lap_u"], rows)


def read_trace_csv(path):
    meta, columns, data = _read_with_header(path)
    if columns != ["theta", "re_u", "im_u", "re_lap_u", "im_lap_u"]:
        raise SchemaError(f"{path}: unexpected columns {columns}")
    circle = make_circle_grid(meta["radius"], meta["angle_count"], meta["aperture"])
    if data.shape[0] != circle.angle_count:
        raise SchemaError(f"{path}: row count does not match angle_count")
    trace = CauchyTrace(
        wavenumber=meta["wavenumber"],
        circle=circle,
        u=data[:, 1] + 1j * data[:, 2],
        lap_u=data[:, 3] + 1j * data[:, 4],
    )
    return trace, meta


def write_coefficients_csv(path, coeffs, meta: dict) -> None:
    from .recon import CoefficientTable  # local import to avoid a cycle

    assert isinstance(coeffs, CoefficientTable)
    meta = dict(meta)
    meta.update(
        period=coeffs.period,
        truncation=coeffs.truncation,
        lambda_zero=coeffs.lambda_zero,
    )
    N = coeffs.truncation
    rows = []
    for l1 in range(-N, N + 1):
        for l2 in range(-N, N + 1):
            if not coeffs.filled[l1 + N, l2 + N]:
                continue
            v = coeffs.values[l1 + N, l2 + N]
            rows.append((l1, l2, v.real, v.imag))
    _write_with_header(path, meta, ["l1", "l2", "re", "im"], rows)


def read_coefficients_csv(path):
    from .recon import CoefficientTable

    meta, columns, data = _read_with_header(path)
    if columns != ["l1", "l2", "re", "im"]:
        raise SchemaError(f"{path}: unexpected columns {columns}")
    coeffs = CoefficientTable(
        period=meta["period"],
        truncation=int(meta["truncation"]),
        lambda_zero=meta["lambda_zero"],
    )
    for l1, l2, re, im in data:
        coeffs.set_mode(int(l1), int(l2), complex(re, im))
    return coeffs, meta


def write_grid_csv(path, grid: CartesianGrid, recon, exact, meta: dict) -> None:
    meta = dict(meta)
    meta.update(period=grid.side_a, points_per_side=grid.points_per_side)
    pts = grid.points
    recon = np.asarray(recon)
    exact = np.asarray(exact, dtype=float)
    err = np.abs(recon - exact)
    rows = zip(pts[:, 0], pts[:, 1], recon.real, recon.imag, exact, err)
    _write_with_header(
        path, meta, ["x1", "x2", "re_recon", "im_recon", "exact", "abs_err"], rows
    )


def read_grid_csv(path):
    meta, columns, data = _read_with_header(path)
    if columns != ["x1", "x2", "re_recon", "im_recon", "exact", "abs_err"]:
        raise SchemaError(f"{path}: unexpected columns {columns}")
    n = int(meta["points_per_side"])
    if data.shape[0] != n * n:
        raise SchemaError(f"{path}: expected {n * n} rows, found {data.shape[0]}")
    grid = CartesianGrid(side_a=meta["period"], points_per_side=n)
    recon = data[:, 2] + 1j * data[:, 3]
    return grid, recon, data[:, 4], meta


def write_json(path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def read_json(path) -> dict:
    return json.loads(Path(path).read_text())
