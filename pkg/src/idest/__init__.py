"""Intrinsic dimension estimation for point clouds.

Estimate the dimension of the manifold a sample was drawn from, as opposed
to the ambient dimension it is embedded in.  Three estimators are provided:
the Levina-Bickel maximum-likelihood estimator built from nearest-neighbor
distance ratios, GeoMLE (a bootstrap-regression correction of its geometry
and sampling bias), and a PCA explained-variance baseline.  A benchmark
harness with seeded synthetic manifold generators, mean-percentage-error
scoring, noise sweeps, and performance-profile curves rounds out the
package; the ``idest`` command line exposes all of it.
"""

from . import errors
from .bench import (
    BenchmarkEntry,
    BenchmarkRun,
    DolanMoreCurve,
    NoiseSweepRow,
    dolan_more,
    mpe,
    noise_sweep,
    run_suite,
)
from .core import (
    EstimateReport,
    GeoMleConfig,
    Method,
    PointCloud,
    PointDiagnostics,
    validate_config,
)
from .estimators import (
    MleLocal,
    PcaConfig,
    geomle_dataset,
    geomle_point,
    mle_dataset,
    mle_point_fixed_k,
    mle_point_fixed_radius,
    pca_estimate,
)
from .io import read_point_cloud_csv, write_labeled_cloud, write_point_cloud_csv
from .manifolds import (
    Kind,
    LabeledCloud,
    ManifoldSpec,
    add_noise,
    generate,
    nonuniform_sphere,
    table1_specs,
)
from .neighbors import NeighborTable, count_within_radius, knn, pairwise_distances
from .regression import WlsProblem, WlsSolution, solve_wls, solve_wls_normal_equations

__version__ = "0.1.0"

__all__ = [
    "BenchmarkEntry",
    "BenchmarkRun",
    "DolanMoreCurve",
    "EstimateReport",
    "GeoMleConfig",
    "Kind",
    "LabeledCloud",
    "ManifoldSpec",
    "Method",
    "MleLocal",
    "NeighborTable",
    "NoiseSweepRow",
    "PcaConfig",
    "PointCloud",
    "PointDiagnostics",
    "WlsProblem",
    "WlsSolution",
    "add_noise",
    "count_within_radius",
    "dolan_more",
    "errors",
    "generate",
    "geomle_dataset",
    "geomle_point",
    "knn",
    "mle_dataset",
    "mle_point_fixed_k",
    "mle_point_fixed_radius",
    "mpe",
    "noise_sweep",
    "nonuniform_sphere",
    "pairwise_distances",
    "pca_estimate",
    "read_point_cloud_csv",
    "run_suite",
    "solve_wls",
    "solve_wls_normal_equations",
    "table1_specs",
    "validate_config",
    "write_labeled_cloud",
    "write_point_cloud_csv",
]
