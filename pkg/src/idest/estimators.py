"""Dimension estimators: Levina-Bickel MLE, GeoMLE, and a PCA baseline.

The MLE inverts the mean log-ratio of nearest-neighbor distances.  GeoMLE
corrects its geometry-induced bias: it bootstrap-resamples the cloud,
averages per-k estimates and their distances over replicates, and fits a
weighted polynomial of the mean estimate against the mean distance; the
fitted value at distance zero is the corrected local estimate.

All estimators depend only on distance ratios (MLE) or distances (GeoMLE),
so they are invariant under isometries; MLE is additionally scale-free.
Internally every log-ratio is computed from distances normalized by the
largest neighbor distance, which makes the per-point estimates bit-identical
under exact (power-of-two) rescaling of the cloud.
"""
from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, replace

import numpy as np

from .core import (
    EstimateReport,
    GeoMleConfig,
    Method,
    PointCloud,
    PointDiagnostics,
    config_snapshot,
    validate_config,
)
from .errors import (
    AllPointsFailed,
    DegenerateNeighborhood,
    EmptyBall,
    RankDeficient,
    ZeroVariance,
)
from .neighbors import distances_to_point, knn, pairwise_distances
from .regression import WlsProblem, WlsSolution, solve_wls

AGGREGATIONS = ("mean", "inverse_mean")


@dataclass(frozen=True)
class MleLocal:
    """A single fixed-k estimate at one point."""

    k: int
    estimate: float


@dataclass(frozen=True)
class PcaConfig:
    """Threshold rule for the PCA baseline: report the smallest number of
    principal components whose eigenvalues capture at least
    ``explained_variance_threshold`` of the total variance."""

    explained_variance_threshold: float = 0.99

    def __post_init__(self):
        t = self.explained_variance_threshold
        if not 0.0 < t < 1.0:
            raise ValueError(f"threshold must lie strictly in (0, 1), got {t}")


def mle_point_fixed_k(neighbor_distances, k: int, duplicate_epsilon: float = 1e-12) -> float:
    """Fixed-k local dimension estimate from a sorted neighbor-distance row.

    Computes the inverse of the mean of log(T_k / T_j) over j = 1..k-1,
    where T_j is the distance to the j-th nearest neighbor.  Every T_j
    below ``duplicate_epsilon * T_k`` is clamped up to that bound before
    the logarithm, so exact duplicates cannot produce infinite terms.

    Raises DegenerateNeighborhood when T_k <= 0 or all T_j equal T_k (the
    log sum vanishes and the estimate would be unbounded).
    """
    t = np.asarray(neighbor_distances, dtype=np.float64).reshape(-1)
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    if t.size < k:
        raise ValueError(f"need {k} neighbor distances, got {t.size}")
    t = t[:k]
    if np.any(np.diff(t) < 0):
        raise ValueError("neighbor distances must be sorted nondecreasing")
    tk = t[-1]
    if tk <= 0:
        raise DegenerateNeighborhood(f"k-th neighbor distance is {tk}")
    ratios = np.maximum(t[:-1] / tk, duplicate_epsilon)
    log_sum = -float(np.log(ratios).sum())
    if log_sum <= 0:
        raise DegenerateNeighborhood("all neighbors lie at the k-th distance")
    return (k - 1) / log_sum


def mle_point_fixed_radius(
    cloud: PointCloud, x, radius: float, duplicate_epsilon: float = 1e-12
) -> float:
    """Fixed-radius local dimension estimate at ``x``.

    Inverts the mean of log(R / T_j) over the N(R, x) sample points within
    distance R, with the same duplicate clamping as the fixed-k form.  ``x``
    is either an in-cloud index (excluded from its own neighbors) or a
    coordinate vector.

    Raises EmptyBall when no sample point lies within R.
    """
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    if isinstance(x, (int, np.integer)):
        i = int(x)
        if not 0 <= i < cloud.n:
            raise IndexError(f"point index {i} out of range for n={cloud.n}")
        d = np.delete(distances_to_point(cloud, cloud.points[i]), i)
    else:
        d = distances_to_point(cloud, x)
    within = d[d <= radius]
    count = within.size
    if count == 0:
        raise EmptyBall(f"no sample points within radius {radius}")
    ratios = np.maximum(within / radius, duplicate_epsilon)
    log_sum = -float(np.log(ratios).sum())
    if log_sum <= 0:
        raise DegenerateNeighborhood("all in-ball neighbors lie at the radius")
    return count / log_sum


def _mle_rows(distances: np.ndarray, k: int, duplicate_epsilon: float):
    """Vectorized fixed-k estimates from sorted distance rows.

    Returns (estimates, valid) where invalid rows are degenerate
    neighborhoods (zero k-th distance or vanishing log sum).
    """
    tk = distances[:, k - 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = distances[:, : k - 1] / tk[:, None]
    ratios = np.maximum(ratios, duplicate_epsilon)
    log_sum = -np.sum(np.log(ratios, where=tk[:, None] > 0, out=np.zeros_like(ratios)), axis=1)
    valid = (tk > 0) & (log_sum > 0)
    estimates = np.full(distances.shape[0], np.nan)
    estimates[valid] = (k - 1) / log_sum[valid]
    return estimates, valid


def mle_dataset(
    cloud: PointCloud,
    k: int,
    aggregation: str = "mean",
    duplicate_epsilon: float = 1e-12,
) -> EstimateReport:
    """Dataset-level MLE: fixed-k estimate at every sample point, aggregated.

    ``aggregation`` is "mean" (arithmetic mean of the local estimates) or
    "inverse_mean" (inverse of the mean inverse, i.e. the harmonic mean).
    Points with degenerate neighborhoods are excluded from the aggregate and
    listed in ``failed_points``.
    """
    if aggregation not in AGGREGATIONS:
        raise ValueError(f"aggregation must be one of {AGGREGATIONS}")
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    table = knn(cloud, cloud, k, exclude_self=True)
    estimates, valid = _mle_rows(table.distances, k, duplicate_epsilon)
    if not valid.any():
        raise AllPointsFailed("every neighborhood was degenerate")
    good = estimates[valid]
    if aggregation == "mean":
        global_estimate = float(np.mean(good))
    else:
        global_estimate = float(1.0 / np.mean(1.0 / good))
    tk = table.distances[:, k - 1]
    per_point = tuple(
        PointDiagnostics(
            point_index=int(i),
            local_estimate=float(estimates[i]),
            per_k=((k, float(tk[i]), float(estimates[i]), 0.0),),
        )
        for i in np.flatnonzero(valid)
    )
    return EstimateReport(
        method=Method.MLE,
        global_estimate=global_estimate,
        per_point=per_point,
        config={
            "k": k,
            "aggregation": aggregation,
            "duplicate_epsilon": duplicate_epsilon,
        },
        failed_points=tuple(int(i) for i in np.flatnonzero(~valid)),
    )


def _mle_curve_block(sorted_distances: np.ndarray, k1: int, k2: int, eps: float):
    """Fixed-k estimates for every k in [k1, k2] from sorted replicate rows.

    ``sorted_distances`` has shape (replicates, k2), each row nondecreasing.
    Rows are normalized by their largest entry before the logarithms; the
    estimate depends only on distance ratios, and the normalization keeps it
    bitwise invariant under exact rescaling.  Returns (estimates, valid)
    with shape (replicates, k2 - k1 + 1); invalid cells are degenerate.
    """
    m, width = sorted_distances.shape
    ks = np.arange(k1, k2 + 1)
    last = sorted_distances[:, -1]
    norm = np.where(last > 0, last, 1.0)
    r = sorted_distances / norm[:, None]
    logs = np.log(np.where(r > 0, r, 1.0))
    csum = np.concatenate([np.zeros((m, 1)), np.cumsum(logs, axis=1)], axis=1)

    rk = r[:, ks - 1]
    log_rk = logs[:, ks - 1]
    # Entries below eps * T_k are clamped before the log; because rows are
    # sorted they form a prefix, whose length is counted here per (row, k).
    below = r[:, None, :] < eps * rk[:, :, None]
    in_range = np.arange(width)[None, :] < (ks - 1)[:, None]
    clamped = (below & in_range[None, :, :]).sum(axis=2)

    head = np.take_along_axis(csum, clamped, axis=1)
    body = csum[:, ks - 1]
    log_sum = (ks[None, :] - 1 - clamped) * log_rk - (body - head) - clamped * np.log(eps)
    valid = (rk > 0) & (log_sum > 0)
    estimates = np.where(valid, (ks[None, :] - 1) / np.where(valid, log_sum, 1.0), np.nan)
    return estimates, valid


def _bootstrap_curves(dist_row: np.ndarray, self_index, cfg: GeoMleConfig, rng):
    """Bootstrap-averaged distance/estimate/variance curves at one point.

    Draws ``cfg.bootstraps`` resamples of the cloud (n draws with
    replacement each, occurrences of the point's own index removed), sorts
    the replicate's distances to the query point, and computes the fixed-k
    estimate for every k in [k1, k2].  Returns per-k arrays
    (ks, mean_distance, mean_estimate, variance, valid_counts, dropped)
    where the means and the population variance (divisor = number of valid
    replicates) are taken over non-degenerate cells only.
    """
    n = dist_row.size
    m_boot, k1, k2 = cfg.bootstraps, cfg.k1, cfg.k2
    idx = rng.integers(0, n, size=(m_boot, n))
    drawn = dist_row[idx]
    if self_index is not None:
        drawn[idx == self_index] = np.inf
    enough = np.sum(idx != self_index, axis=1) >= k2 if self_index is not None else np.ones(m_boot, bool)

    part = np.partition(drawn, k2 - 1, axis=1)[:, :k2]
    sorted_d = np.sort(part, axis=1)
    estimates, valid = _mle_curve_block(sorted_d, k1, k2, cfg.duplicate_epsilon)
    valid &= enough[:, None] & np.isfinite(sorted_d[:, k2 - 1 : k2])

    counts = valid.sum(axis=0)
    ks = np.arange(k1, k2 + 1)
    tk = np.where(valid, sorted_d[:, ks - 1], 0.0)
    mk = np.where(valid, estimates, 0.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        tbar = np.where(counts > 0, tk.sum(axis=0) / counts, np.nan)
        mbar = np.where(counts > 0, mk.sum(axis=0) / counts, np.nan)
        dev = np.where(valid, estimates - mbar[None, :], 0.0)
        var = np.where(counts > 0, (dev * dev).sum(axis=0) / counts, np.nan)
    dropped = int(m_boot * ks.size - counts.sum())
    return ks, tbar, mbar, var, counts, dropped


def fit_dimension_curve(
    ks, tbar, mbar, var, counts, degree: int, variance_floor: float
) -> tuple[WlsSolution, np.ndarray]:
    """Weighted polynomial fit of mean estimates against mean distances.

    Keeps only k values with at least one valid replicate, weights each by
    the inverse of max(variance, variance_floor), and returns the solution
    together with the boolean keep mask.  Raises RankDeficient when fewer
    than degree + 2 k values survive.
    """
    keep = np.asarray(counts) > 0
    if int(keep.sum()) < degree + 2:
        raise RankDeficient(
            f"only {int(keep.sum())} usable k values for a degree-{degree} fit"
        )
    weights = 1.0 / np.maximum(np.asarray(var)[keep], variance_floor)
    problem = WlsProblem(
        xs=np.asarray(tbar)[keep],
        ys=np.asarray(mbar)[keep],
        weights=weights,
        degree=degree,
    )
    return solve_wls(problem), keep


def geomle_point(cloud: PointCloud, x, cfg: GeoMleConfig, rng) -> PointDiagnostics:
    """GeoMLE local estimate at one point.

    ``x`` is an in-cloud index (its own draws are removed from every
    bootstrap replicate) or a coordinate vector queried against intact
    replicates.  ``rng`` is a numpy Generator owning this point's draws.
    The local estimate is the fitted intercept at distance zero; degenerate
    bootstrap cells are dropped and counted in ``dropped_cells``.
    """
    validate_config(cfg, cloud)
    if isinstance(x, (int, np.integer)):
        i = int(x)
        if not 0 <= i < cloud.n:
            raise IndexError(f"point index {i} out of range for n={cloud.n}")
        dist_row = distances_to_point(cloud, cloud.points[i])
        self_index = i
    else:
        dist_row = distances_to_point(cloud, x)
        self_index = None
    return _geomle_from_distances(dist_row, self_index, cfg, rng)


def _geomle_from_distances(dist_row, self_index, cfg: GeoMleConfig, rng) -> PointDiagnostics:
    ks, tbar, mbar, var, counts, dropped = _bootstrap_curves(dist_row, self_index, cfg, rng)
    solution, keep = fit_dimension_curve(
        ks, tbar, mbar, var, counts, cfg.degree, cfg.variance_floor
    )
    per_k = tuple(
        (int(k), float(t), float(m), float(v))
        for k, t, m, v in zip(ks[keep], tbar[keep], mbar[keep], var[keep])
    )
    return PointDiagnostics(
        point_index=-1 if self_index is None else self_index,
        local_estimate=solution.intercept,
        per_k=per_k,
        eta=tuple(float(e) for e in solution.eta),
        dropped_cells=dropped,
    )


def _point_rngs(seed: int, n: int):
    """One independent, deterministically derived generator per point.

    Substream identity is the point index, so results do not depend on how
    points are scheduled across workers.
    """
    children = np.random.SeedSequence(seed).spawn(n)
    return [np.random.Generator(np.random.PCG64(c)) for c in children]


def geomle_dataset(cloud: PointCloud, cfg: GeoMleConfig, threads: int = 1) -> EstimateReport:
    """GeoMLE at every sample point, averaged.

    Each point owns an independent seeded substream, so reports are
    bit-identical for any ``threads`` value.  Points whose regression fails
    are excluded and listed in ``failed_points``; AllPointsFailed is raised
    when nothing survives.
    """
    validate_config(cfg, cloud)
    if threads < 1:
        raise ValueError(f"threads must be at least 1, got {threads}")
    n = cloud.n
    dist = pairwise_distances(cloud.points, cloud.points)
    rngs = _point_rngs(cfg.seed, n)

    def work(i: int):
        try:
            return _geomle_from_distances(dist[i], i, cfg, rngs[i])
        except RankDeficient as exc:
            return exc

    if threads == 1:
        results = [work(i) for i in range(n)]
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, range(n)))

    diagnostics = [r for r in results if isinstance(r, PointDiagnostics)]
    failed = tuple(i for i, r in enumerate(results) if not isinstance(r, PointDiagnostics))
    if not diagnostics:
        raise AllPointsFailed("the regression failed at every point")
    locals_ = np.array([d.local_estimate for d in diagnostics])
    return EstimateReport(
        method=Method.GEOMLE,
        global_estimate=float(np.mean(locals_)),
        per_point=tuple(diagnostics),
        config=config_snapshot(cfg),
        failed_points=failed,
    )


def pca_estimate(cloud: PointCloud, cfg: PcaConfig = PcaConfig()) -> EstimateReport:
    """Global PCA baseline: smallest number of principal components whose
    eigenvalues capture at least the configured share of total variance.

    Raises ZeroVariance when all points are identical.
    """
    centered = cloud.points - cloud.points.mean(axis=0)
    singular = np.linalg.svd(centered, compute_uv=False)
    eigenvalues = singular**2
    total = float(eigenvalues.sum())
    if total <= 0.0:
        raise ZeroVariance("all points are identical")
    fractions = np.cumsum(eigenvalues) / total
    fractions[-1] = max(fractions[-1], 1.0)
    d = int(np.searchsorted(fractions, cfg.explained_variance_threshold) + 1)
    d = min(d, eigenvalues.size)
    return EstimateReport(
        method=Method.PCA,
        global_estimate=float(d),
        per_point=(),
        config={"explained_variance_threshold": cfg.explained_variance_threshold},
        failed_points=(),
    )


def with_seed(cfg: GeoMleConfig, seed: int) -> GeoMleConfig:
    """Copy of ``cfg`` with a different RNG seed."""
    return replace(cfg, seed=seed)
