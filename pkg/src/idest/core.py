"""Shared data model: point clouds, estimator configuration, and reports.

All types are immutable value types once constructed and can be shared
freely across threads.
"""
from __future__ import annotations

import enum
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ConfigError


class Method(str, enum.Enum):
    """Dimension estimation method identifiers used in reports and benchmarks."""

    MLE = "mle"
    GEOMLE = "geomle"
    PCA = "pca"


@dataclass(frozen=True)
class PointCloud:
    """A finite sample of n points in an ambient Euclidean space of dimension p.

    Parameters
    ----------
    points : array-like, shape (n, p)
        Sample coordinates; copied to a read-only float64 array.
    label : str, optional
        Free-form tag carried along for reporting.
    """

    points: np.ndarray
    label: str | None = None

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64, copy=True)
        if pts.ndim != 2:
            raise ValueError(f"points must be a 2-d array, got ndim={pts.ndim}")
        n, p = pts.shape
        if n < 2:
            raise ValueError(f"need at least 2 points, got n={n}")
        if p < 1:
            raise ValueError("ambient dimension must be at least 1")
        if not np.isfinite(pts).all():
            raise ValueError("points contain NaN or infinite coordinates")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class GeoMleConfig:
    """Configuration of the bootstrap-regression (GeoMLE) estimator.

    ``k1``/``k2`` bound the neighbor range the per-point regression is fit
    over, ``bootstraps`` is the number of resampled datasets, ``degree`` the
    order of the correction polynomial.  ``variance_floor`` keeps regression
    weights finite when all bootstrap replicates agree, and
    ``duplicate_epsilon`` clamps near-zero neighbor distances (exact
    duplicates) before taking logarithms.
    """

    k1: int = 10
    k2: int = 40
    bootstraps: int = 20
    degree: int = 2
    seed: int = 0
    variance_floor: float = 1e-10
    duplicate_epsilon: float = 1e-12


def validate_config(cfg: GeoMleConfig, cloud: PointCloud) -> None:
    """Check every GeoMleConfig constraint against the given cloud.

    Raises ConfigError naming the first violated constraint; returns None
    when all constraints hold.  Deterministic and side-effect free.
    """
    n = cloud.n
    if cfg.k1 < 2:
        raise ConfigError(f"k1 >= 2 violated (k1={cfg.k1})")
    if cfg.k1 > cfg.k2:
        raise ConfigError(f"k1 <= k2 violated (k1={cfg.k1}, k2={cfg.k2})")
    if cfg.k2 >= n:
        raise ConfigError(f"k2 < n violated (k2={cfg.k2}, n={n})")
    if cfg.degree < 1:
        raise ConfigError(f"degree >= 1 violated (degree={cfg.degree})")
    if cfg.k2 - cfg.k1 + 1 < cfg.degree + 2:
        raise ConfigError(
            f"k2 - k1 + 1 >= degree + 2 violated "
            f"(k1={cfg.k1}, k2={cfg.k2}, degree={cfg.degree})"
        )
    if cfg.bootstraps < 1:
        raise ConfigError(f"bootstraps >= 1 violated (bootstraps={cfg.bootstraps})")
    if not cfg.variance_floor > 0:
        raise ConfigError(f"variance_floor > 0 violated ({cfg.variance_floor})")
    if not cfg.duplicate_epsilon > 0:
        raise ConfigError(f"duplicate_epsilon > 0 violated ({cfg.duplicate_epsilon})")


@dataclass(frozen=True)
class PointDiagnostics:
    """Per-point estimate with the quantities that produced it.

    ``per_k`` holds one row ``(k, mean_distance, mean_estimate, variance)``
    per neighbor count that contributed; rows are sorted ascending in k.
    ``eta`` are the fitted correction-polynomial coefficients (empty for
    methods that fit none).  ``dropped_cells`` counts bootstrap cells that
    were discarded as degenerate before averaging.
    """

    point_index: int
    local_estimate: float
    per_k: tuple[tuple[int, float, float, float], ...] = ()
    eta: tuple[float, ...] = ()
    dropped_cells: int = 0


@dataclass(frozen=True)
class EstimateReport:
    """Aggregated dimension estimate plus per-point diagnostics.

    ``global_estimate`` is the documented aggregation of the per-point
    estimates (arithmetic mean unless the config snapshot says otherwise).
    ``failed_points`` lists indices whose per-point estimate failed and was
    excluded from the aggregate.
    """

    method: Method
    global_estimate: float
    per_point: tuple[PointDiagnostics, ...] = ()
    config: dict = field(default_factory=dict)
    failed_points: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        """Plain-dict form matching the documented JSON schema."""
        return {
            "method": self.method.value,
            "global_estimate": self.global_estimate,
            "config": dict(self.config),
            "per_point": [
                {
                    "index": d.point_index,
                    "estimate": d.local_estimate,
                    "per_k": [[k, t, m, v] for (k, t, m, v) in d.per_k],
                    "eta": list(d.eta),
                    "dropped_cells": d.dropped_cells,
                }
                for d in self.per_point
            ],
            "failed_points": list(self.failed_points),
        }

    def to_json(self) -> str:
        """Stable-key-ordered JSON; floats round-trip exactly."""
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "EstimateReport":
        per_point = tuple(
            PointDiagnostics(
                point_index=int(d["index"]),
                local_estimate=float(d["estimate"]),
                per_k=tuple(
                    (int(k), float(t), float(m), float(v)) for k, t, m, v in d["per_k"]
                ),
                eta=tuple(float(e) for e in d["eta"]),
                dropped_cells=int(d.get("dropped_cells", 0)),
            )
            for d in data["per_point"]
        )
        return cls(
            method=Method(data["method"]),
            global_estimate=float(data["global_estimate"]),
            per_point=per_point,
            config=dict(data["config"]),
            failed_points=tuple(int(i) for i in data["failed_points"]),
        )

    @classmethod
    def from_json(cls, text: str) -> "EstimateReport":
        return cls.from_dict(json.loads(text))


def config_snapshot(cfg: GeoMleConfig) -> dict:
    """JSON-friendly snapshot of a GeoMleConfig."""
    return asdict(cfg)
