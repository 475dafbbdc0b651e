"""CSV point-cloud ingestion and emission plus spec sidecar files.

CSV cells use the shortest decimal representation that round-trips the
underlying 64-bit float, with '.' as the decimal separator regardless of
locale, so emitted files are portable golden material.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .core import PointCloud
from .errors import DataFormatError
from .manifolds import Kind, LabeledCloud, ManifoldSpec


def _parse_row(cells: list[str]) -> list[float] | None:
    try:
        return [float(c) for c in cells]
    except ValueError:
        return None


def read_point_cloud_csv(path) -> PointCloud:
    """Parse a CSV file of one point per row into a PointCloud.

    A non-numeric first row is treated as a header and skipped; any later
    non-numeric cell, ragged row, or an empty file raises DataFormatError.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from exc
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise DataFormatError(f"{path} contains no data rows")
    rows = [line.split(",") for line in lines]
    first = _parse_row(rows[0])
    start = 0 if first is not None else 1
    width = len(rows[0])
    parsed = []
    for lineno, cells in enumerate(rows[start:], start=start + 1):
        if len(cells) != width:
            raise DataFormatError(
                f"{path}: row {lineno} has {len(cells)} columns, expected {width}"
            )
        values = _parse_row(cells)
        if values is None:
            raise DataFormatError(f"{path}: row {lineno} contains a non-numeric cell")
        parsed.append(values)
    if not parsed:
        raise DataFormatError(f"{path} contains no data rows")
    try:
        return PointCloud(np.array(parsed, dtype=np.float64))
    except ValueError as exc:
        raise DataFormatError(f"{path}: {exc}") from exc


def write_point_cloud_csv(cloud: PointCloud, path, header: bool = False) -> Path:
    """Write one row per point; ``header`` adds column names x0..x{p-1}."""
    path = Path(path)
    lines = []
    if header:
        lines.append(",".join(f"x{j}" for j in range(cloud.ambient_dim)))
    for row in cloud.points:
        lines.append(",".join(repr(float(v)) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def sidecar_path(csv_path) -> Path:
    csv_path = Path(csv_path)
    if csv_path.suffix == ".csv":
        return csv_path.with_suffix(".meta.json")
    return csv_path.with_name(csv_path.name + ".meta.json")


def write_labeled_cloud(labeled: LabeledCloud, path, header: bool = False) -> Path:
    """Write the cloud CSV plus a JSON sidecar holding the generating spec
    and seed; returns the sidecar path."""
    write_point_cloud_csv(labeled.cloud, path, header=header)
    meta = {
        "kind": labeled.spec.kind.value,
        "m": labeled.spec.m,
        "p": labeled.spec.p,
        "n": labeled.spec.n,
        "seed": labeled.spec.seed,
        "true_dim": labeled.true_dim,
    }
    side = sidecar_path(path)
    side.write_text(json.dumps(meta, sort_keys=True) + "\n")
    return side


def read_suite_file(path) -> list[ManifoldSpec]:
    """Parse a JSON list of manifold specs ({kind, m, p, n[, seed]})."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, list) or not data:
        raise DataFormatError(f"{path} must hold a nonempty JSON list of specs")
    specs = []
    for i, item in enumerate(data):
        try:
            specs.append(
                ManifoldSpec(
                    kind=Kind(item["kind"]),
                    m=int(item["m"]),
                    p=int(item["p"]),
                    n=int(item["n"]),
                    seed=int(item.get("seed", 0)),
                )
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise DataFormatError(f"{path}: bad spec at index {i}: {exc}") from exc
    return specs
