"""Seeded generators for the synthetic benchmark manifolds.

Each generator is a pure function of (spec, seed) using numpy's PCG64
stream, so clouds are bit-reproducible; golden tests pin the first sample
of every kind.  Parameterizations (fixed here, documented per generator):

  affine        u ~ U[0,1]^m mapped by a random orthonormal p x m frame
                plus a random offset in [-1,1]^p.
  norm          standard normal in the first m coordinates, zeros elsewhere.
  uniform       u ~ U[0,1]^m in the first m coordinates, zeros elsewhere.
  sphere        normalized (m+1)-dimensional Gaussian, zero-padded and
                rotated into p dimensions by a random orthonormal frame.
  nonuniform_sphere
                u ~ U[-1,1]^m mapped to (u, 1)/|(u, 1)| on the m-sphere
                (provably nonuniform density), then framed into p dims.
  helix1d       t ~ U[0,2pi): ((2+cos 8t)cos t, (2+cos 8t)sin t, sin 8t).
  helix2d       t ~ U[0,2pi), w ~ U[0,1]: ruled surface
                ((2+w cos 8t)cos t, (2+w cos 8t)sin t, w sin 8t).
  swissroll     t ~ U[3pi/2, 9pi/2], h ~ U[0,21]: (t cos t, h, t sin t).
  moebius       t ~ U[0,2pi), v ~ U[-1,1]:
                ((1+v/2 cos t/2)cos t, (1+v/2 cos t/2)sin t, v/2 sin t/2).
  spiral        t ~ U[0,4pi]: (t cos t, t sin t, 0).
  paraboloid    u ~ U[-1,1]^m: (u, |u|^2) tiled three times over sqrt(3),
                giving 3(m+1) base coordinates.
  nonlinear     y ~ U[0,1]^m: coordinate pairs
                (y_{i+1 mod m} cos 2pi y_i, y_{i+1 mod m} sin 2pi y_i)
                for i = 0..m-1, tiled three times over sqrt(3) (6m coords).
  cubesurface   uniform sample of the boundary of [0,1]^(m+1): pick a face
                (axis and side uniformly), fill the remaining coordinates
                uniformly.

Base coordinates beyond the listed block are zero; every kind except norm
and uniform is then rotated by a seeded orthonormal frame drawn *before*
the sample coordinates, so two kinds sharing (m, p, seed) share the frame.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import PointCloud
from .errors import SpecError


class Kind(str, enum.Enum):
    AFFINE = "affine"
    NORM = "norm"
    UNIFORM = "uniform"
    SPHERE = "sphere"
    NONUNIFORM_SPHERE = "nonuniform_sphere"
    HELIX1D = "helix1d"
    HELIX2D = "helix2d"
    SWISS_ROLL = "swissroll"
    MOEBIUS = "moebius"
    SPIRAL = "spiral"
    PARABOLOID = "paraboloid"
    NONLINEAR = "nonlinear"
    CUBE_SURFACE = "cubesurface"


@dataclass(frozen=True)
class ManifoldSpec:
    """What to sample: manifold kind, intrinsic dimension m, ambient
    dimension p, sample size n, and RNG seed."""

    kind: Kind
    m: int
    p: int
    n: int
    seed: int = 0

    @property
    def name(self) -> str:
        return f"{self.kind.value}_m{self.m}_p{self.p}"


@dataclass(frozen=True)
class LabeledCloud:
    """A generated cloud together with its ground-truth dimension."""

    cloud: PointCloud
    true_dim: int
    spec: ManifoldSpec


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def embedding_frame(rng: np.random.Generator, p: int, d: int) -> np.ndarray:
    """Seeded random p x d orthonormal frame (QR of a Gaussian matrix with
    the sign convention that makes it unique)."""
    g = rng.standard_normal((p, d))
    q, r = np.linalg.qr(g)
    signs = np.where(np.diag(r) < 0, -1.0, 1.0)
    return q * signs[None, :]


def _pad(block: np.ndarray, p: int) -> np.ndarray:
    n, d = block.shape
    if d == p:
        return block
    out = np.zeros((n, p))
    out[:, :d] = block
    return out


# base ambient dimension of each kind's parameterization, as functions of m
def _base_dim(kind: Kind, m: int) -> int:
    if kind in (Kind.AFFINE, Kind.NORM, Kind.UNIFORM):
        return m
    if kind in (Kind.SPHERE, Kind.NONUNIFORM_SPHERE, Kind.CUBE_SURFACE):
        return m + 1
    if kind in (Kind.HELIX1D, Kind.HELIX2D, Kind.SWISS_ROLL, Kind.MOEBIUS, Kind.SPIRAL):
        return 3
    if kind is Kind.PARABOLOID:
        return 3 * (m + 1)
    if kind is Kind.NONLINEAR:
        return 6 * m
    raise SpecError(f"unknown kind {kind}")


_FIXED_M = {
    Kind.HELIX1D: 1,
    Kind.HELIX2D: 2,
    Kind.SWISS_ROLL: 2,
    Kind.MOEBIUS: 2,
    Kind.SPIRAL: 1,
}


def _check(spec: ManifoldSpec) -> None:
    if spec.n < 2:
        raise SpecError(f"n >= 2 required, got n={spec.n}")
    if spec.m < 1:
        raise SpecError(f"m >= 1 required, got m={spec.m}")
    if spec.kind in _FIXED_M and spec.m != _FIXED_M[spec.kind]:
        raise SpecError(
            f"{spec.kind.value} fixes m={_FIXED_M[spec.kind]}, got m={spec.m}"
        )
    if spec.kind is Kind.NONLINEAR and spec.m < 2:
        raise SpecError("nonlinear requires m >= 2")
    base = _base_dim(spec.kind, spec.m)
    if spec.p < base:
        raise SpecError(
            f"{spec.kind.value} with m={spec.m} needs p >= {base}, got p={spec.p}"
        )
    if spec.m > spec.p:
        raise SpecError(f"m <= p required, got m={spec.m}, p={spec.p}")


def _unit_rows(rows: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(rows, axis=1, keepdims=True)
    return rows / norms


def generate(spec: ManifoldSpec) -> LabeledCloud:
    """Sample ``spec.n`` seeded points from the requested manifold.

    Raises SpecError on violated kind constraints.  Draw order per kind is
    frozen (frame, then offsets, then sample coordinates) because golden
    files depend on it.
    """
    _check(spec)
    rng = _rng(spec.seed)
    kind, m, p, n = spec.kind, spec.m, spec.p, spec.n

    if kind is Kind.NORM:
        pts = _pad(rng.standard_normal((n, m)), p)
    elif kind is Kind.UNIFORM:
        pts = _pad(rng.uniform(0.0, 1.0, (n, m)), p)
    elif kind is Kind.AFFINE:
        frame = embedding_frame(rng, p, m)
        offset = rng.uniform(-1.0, 1.0, p)
        pts = rng.uniform(0.0, 1.0, (n, m)) @ frame.T + offset
    else:
        base = _base_dim(kind, m)
        frame = embedding_frame(rng, p, base)
        if kind is Kind.SPHERE:
            block = _unit_rows(rng.standard_normal((n, m + 1)))
        elif kind is Kind.NONUNIFORM_SPHERE:
            u = rng.uniform(-1.0, 1.0, (n, m))
            block = _unit_rows(np.hstack([u, np.ones((n, 1))]))
        elif kind is Kind.HELIX1D:
            t = rng.uniform(0.0, 2.0 * np.pi, n)
            rad = 2.0 + np.cos(8.0 * t)
            block = np.column_stack([rad * np.cos(t), rad * np.sin(t), np.sin(8.0 * t)])
        elif kind is Kind.HELIX2D:
            t = rng.uniform(0.0, 2.0 * np.pi, n)
            w = rng.uniform(0.0, 1.0, n)
            rad = 2.0 + w * np.cos(8.0 * t)
            block = np.column_stack(
                [rad * np.cos(t), rad * np.sin(t), w * np.sin(8.0 * t)]
            )
        elif kind is Kind.SWISS_ROLL:
            t = rng.uniform(1.5 * np.pi, 4.5 * np.pi, n)
            h = rng.uniform(0.0, 21.0, n)
            block = np.column_stack([t * np.cos(t), h, t * np.sin(t)])
        elif kind is Kind.MOEBIUS:
            t = rng.uniform(0.0, 2.0 * np.pi, n)
            v = rng.uniform(-1.0, 1.0, n)
            rad = 1.0 + 0.5 * v * np.cos(0.5 * t)
            block = np.column_stack(
                [rad * np.cos(t), rad * np.sin(t), 0.5 * v * np.sin(0.5 * t)]
            )
        elif kind is Kind.SPIRAL:
            t = rng.uniform(0.0, 4.0 * np.pi, n)
            block = np.column_stack([t * np.cos(t), t * np.sin(t), np.zeros(n)])
        elif kind is Kind.PARABOLOID:
            u = rng.uniform(-1.0, 1.0, (n, m))
            bowl = np.hstack([u, np.sum(u * u, axis=1, keepdims=True)])
            block = np.tile(bowl, 3) / np.sqrt(3.0)
        elif kind is Kind.NONLINEAR:
            y = rng.uniform(0.0, 1.0, (n, m))
            pairs = np.empty((n, 2 * m))
            for i in range(m):
                radius = y[:, (i + 1) % m]
                angle = 2.0 * np.pi * y[:, i]
                pairs[:, 2 * i] = radius * np.cos(angle)
                pairs[:, 2 * i + 1] = radius * np.sin(angle)
            block = np.tile(pairs, 3) / np.sqrt(3.0)
        elif kind is Kind.CUBE_SURFACE:
            d = m + 1
            u = rng.uniform(0.0, 1.0, (n, d))
            axes = rng.integers(0, d, n)
            sides = rng.integers(0, 2, n)
            u[np.arange(n), axes] = sides.astype(np.float64)
            block = u
        else:  # pragma: no cover
            raise SpecError(f"unknown kind {kind}")
        pts = block @ frame.T

    cloud = PointCloud(pts, label=spec.name)
    return LabeledCloud(cloud=cloud, true_dim=m, spec=spec)


def nonuniform_sphere(m: int, p: int, n: int, seed: int = 0) -> LabeledCloud:
    """Sphere with provably nonuniform density: uniform cube samples pushed
    onto the m-sphere through (u, 1)/|(u, 1)|, then framed into p dims."""
    return generate(ManifoldSpec(Kind.NONUNIFORM_SPHERE, m=m, p=p, n=n, seed=seed))


def add_noise(cloud: PointCloud, sigma: float, seed: int = 0) -> PointCloud:
    """Add i.i.d. centered Gaussian noise of the given standard deviation to
    every coordinate.  ``sigma == 0`` returns the input unchanged."""
    if sigma < 0:
        raise ValueError(f"sigma must be nonnegative, got {sigma}")
    if sigma == 0:
        return cloud
    noise = _rng(seed).normal(0.0, sigma, cloud.points.shape)
    return PointCloud(cloud.points + noise, label=cloud.label)


def table1_specs(n: int = 1000) -> list[ManifoldSpec]:
    """The twelve synthetic benchmark rows (seed fields are placeholders;
    the benchmark runner derives per-replicate seeds)."""
    rows = [
        (Kind.AFFINE, 10, 10),
        (Kind.CUBE_SURFACE, 30, 35),
        (Kind.HELIX1D, 1, 3),
        (Kind.HELIX2D, 2, 13),
        (Kind.MOEBIUS, 2, 3),
        (Kind.NONLINEAR, 6, 36),
        (Kind.NORM, 50, 50),
        (Kind.PARABOLOID, 9, 30),
        (Kind.SWISS_ROLL, 2, 3),
        (Kind.SPHERE, 10, 15),
        (Kind.SPIRAL, 1, 3),
        (Kind.UNIFORM, 50, 55),
    ]
    return [ManifoldSpec(kind, m=m, p=p, n=n) for kind, m, p in rows]
