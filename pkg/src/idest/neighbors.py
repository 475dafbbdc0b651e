"""Exact k-nearest-neighbor queries under the Euclidean metric.

Distances are computed as the square root of the per-dimension sum of
squared differences, accumulated dimension by dimension in a fixed order.
That keeps results bit-identical to a scalar reference loop and independent
of chunking or worker count.  Brute force is the reference (and only) path:
sample sizes around 10^3 make exactness cheaper than cleverness.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import PointCloud
from .errors import DimensionMismatch, KTooLarge

_CHUNK_ROWS = 256


@dataclass(frozen=True)
class NeighborTable:
    """Sorted neighbor distances and indices for a batch of queries.

    ``distances[i][j-1]`` is the distance from query i to its j-th nearest
    sample point; rows are sorted by (distance, sample index).  When queries
    come from the sample itself the query point is excluded by index, so
    exact duplicates remain as zero-distance neighbors.
    """

    distances: np.ndarray
    indices: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.distances, dtype=np.float64)
        i = np.asarray(self.indices, dtype=np.int64)
        d.setflags(write=False)
        i.setflags(write=False)
        object.__setattr__(self, "distances", d)
        object.__setattr__(self, "indices", i)

    @property
    def query_count(self) -> int:
        return self.distances.shape[0]

    @property
    def k_max(self) -> int:
        return self.distances.shape[1]


def pairwise_distances(queries: np.ndarray, samples: np.ndarray) -> np.ndarray:
    """Exact Euclidean distance matrix, shape (len(queries), len(samples)).

    Accumulates squared differences one dimension at a time so every entry
    is computed with the same floating-point operation order regardless of
    chunking.
    """
    queries = np.asarray(queries, dtype=np.float64)
    samples = np.asarray(samples, dtype=np.float64)
    q, p = queries.shape
    n = samples.shape[0]
    out = np.empty((q, n), dtype=np.float64)
    tmp = np.empty((min(_CHUNK_ROWS, q), n), dtype=np.float64)
    for start in range(0, q, _CHUNK_ROWS):
        end = min(start + _CHUNK_ROWS, q)
        rows = end - start
        block = np.zeros((rows, n), dtype=np.float64)
        t = tmp[:rows]
        for dim in range(p):
            np.subtract(queries[start:end, dim, None], samples[None, :, dim], out=t)
            np.multiply(t, t, out=t)
            block += t
        np.sqrt(block, out=block)
        out[start:end] = block
    return out


def distances_to_point(cloud: PointCloud, point) -> np.ndarray:
    """Distances from one query point to every sample point."""
    x = np.asarray(point, dtype=np.float64).reshape(-1)
    if x.shape[0] != cloud.ambient_dim:
        raise DimensionMismatch(
            f"query has dimension {x.shape[0]}, cloud has {cloud.ambient_dim}"
        )
    return pairwise_distances(x[None, :], cloud.points)[0]


def knn(
    cloud: PointCloud,
    queries: PointCloud,
    k: int,
    exclude_self: bool = False,
) -> NeighborTable:
    """Exact k nearest neighbors of each query point within ``cloud``.

    Ties are broken by lower sample index, so the result is fully
    deterministic.  With ``exclude_self`` the queries must be the cloud's own
    rows (aligned by index); each query then skips its own row, which keeps
    zero-distance duplicates but never the point itself.

    Raises DimensionMismatch on ambient-dimension disagreement and KTooLarge
    when k exceeds the number of available neighbors.
    """
    if queries.ambient_dim != cloud.ambient_dim:
        raise DimensionMismatch(
            f"queries have dimension {queries.ambient_dim}, "
            f"cloud has {cloud.ambient_dim}"
        )
    n = cloud.n
    if exclude_self and queries.n != n:
        raise ValueError("exclude_self requires queries aligned with the cloud rows")
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    limit = n - 1 if exclude_self else n
    if k > limit:
        raise KTooLarge(f"k={k} exceeds available neighbors ({limit})")

    q = queries.n
    dist = np.empty((q, k), dtype=np.float64)
    idx = np.empty((q, k), dtype=np.int64)
    col_ids = np.arange(n, dtype=np.int64)
    for start in range(0, q, _CHUNK_ROWS):
        end = min(start + _CHUNK_ROWS, q)
        block = pairwise_distances(queries.points[start:end], cloud.points)
        if exclude_self:
            rows = np.arange(start, end)
            block[rows - start, rows] = np.inf
        ids = np.broadcast_to(col_ids, block.shape)
        order = np.lexsort((ids, block), axis=-1)[:, :k]
        dist[start:end] = np.take_along_axis(block, order, axis=1)
        idx[start:end] = order
    return NeighborTable(distances=dist, indices=idx)


def count_within_radius(cloud: PointCloud, x, radius: float) -> int:
    """Number of sample points within distance ``radius`` of ``x`` (inclusive).

    ``x`` may be an integer index into the cloud, in which case the point
    itself is excluded by index, or a coordinate vector treated as an
    external query.
    """
    if radius < 0:
        raise ValueError(f"radius must be nonnegative, got {radius}")
    if isinstance(x, (int, np.integer)):
        i = int(x)
        if not 0 <= i < cloud.n:
            raise IndexError(f"point index {i} out of range for n={cloud.n}")
        d = distances_to_point(cloud, cloud.points[i])
        d = np.delete(d, i)
    else:
        d = distances_to_point(cloud, x)
    return int(np.count_nonzero(d <= radius))
