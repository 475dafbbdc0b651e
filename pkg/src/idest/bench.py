"""Benchmark harness: suite runs, MPE scoring, performance-profile curves,
and noise sweeps, with CSV/JSON persistence.

A "problem" is one (dataset, replicate) pair.  Per-entry failures are
recorded with a reason and never abort a suite; failed entries behave as
infinite error in the profile curves and are excluded from MPE.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .core import GeoMleConfig, Method, PointCloud
from .errors import DataFormatError, IdestError, MissingEntries
from .estimators import PcaConfig, geomle_dataset, mle_dataset, pca_estimate
from .manifolds import Kind, ManifoldSpec, add_noise, generate

RATIO_EPSILON = 1e-9

_RUN_COLUMNS = (
    "dataset",
    "kind",
    "m",
    "p",
    "n",
    "replicate",
    "method",
    "estimate",
    "abs_error",
    "wall_time_s",
)


@dataclass(frozen=True)
class BenchmarkEntry:
    """One method's result on one generated dataset replicate."""

    spec: ManifoldSpec
    replicate: int
    method: Method
    estimate: float | None
    true_dim: int
    wall_time: float
    failure: str | None = None

    @property
    def abs_error(self) -> float:
        if self.estimate is None:
            return float("inf")
        return abs(self.true_dim - self.estimate)


@dataclass(frozen=True)
class BenchmarkRun:
    """An ordered collection of benchmark entries."""

    entries: tuple[BenchmarkEntry, ...]

    def methods(self) -> list[Method]:
        seen = []
        for e in self.entries:
            if e.method not in seen:
                seen.append(e.method)
        return seen

    def problems(self) -> list[tuple[str, int]]:
        seen = []
        for e in self.entries:
            key = (e.spec.name, e.replicate)
            if key not in seen:
                seen.append(key)
        return seen


@dataclass(frozen=True)
class DolanMoreCurve:
    """Performance profile of one method: p(tau) is the fraction of problems
    whose error is within a factor tau of the best method's error on that
    problem.  Fractions are nondecreasing in tau."""

    method: Method
    taus: np.ndarray
    fractions: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.taus, dtype=np.float64)
        f = np.asarray(self.fractions, dtype=np.float64)
        t.setflags(write=False)
        f.setflags(write=False)
        object.__setattr__(self, "taus", t)
        object.__setattr__(self, "fractions", f)


@dataclass(frozen=True)
class NoiseSweepRow:
    sigma: float
    method: Method
    mpe: float


def _derived_seed(base_seed: int, *key: int) -> int:
    """Deterministic child seed for a (purpose, spec, replicate, ...) slot."""
    ss = np.random.SeedSequence(entropy=base_seed, spawn_key=tuple(key))
    return int(ss.generate_state(1, np.uint64)[0])


def _estimate_one(
    method: Method,
    cloud: PointCloud,
    estimator_seed: int,
    mle_k: int,
    mle_aggregation: str,
    pca_threshold: float,
    geomle_config: GeoMleConfig,
    threads: int,
) -> float:
    if method is Method.MLE:
        return mle_dataset(cloud, k=mle_k, aggregation=mle_aggregation).global_estimate
    if method is Method.GEOMLE:
        cfg = replace(geomle_config, seed=estimator_seed)
        return geomle_dataset(cloud, cfg, threads=threads).global_estimate
    if method is Method.PCA:
        return pca_estimate(cloud, PcaConfig(pca_threshold)).global_estimate
    raise ValueError(f"unknown method {method}")


def run_suite(
    specs: list[ManifoldSpec],
    methods: list[Method],
    replicates: int,
    base_seed: int,
    *,
    mle_k: int = 20,
    mle_aggregation: str = "mean",
    pca_threshold: float = 0.99,
    geomle_config: GeoMleConfig | None = None,
    threads: int = 1,
) -> BenchmarkRun:
    """Run every method on fresh seeded clouds for each (spec, replicate).

    Cloud and estimator seeds are derived from ``base_seed`` and the
    (spec index, replicate) slot, so reruns are bit-identical and a noise
    sweep at sigma = 0 reproduces this run exactly.  Per-entry failures are
    recorded with their reason instead of aborting.
    """
    if not specs:
        raise ValueError("specs must be nonempty")
    if replicates < 1:
        raise ValueError("replicates must be at least 1")
    if geomle_config is None:
        geomle_config = GeoMleConfig()
    entries = []
    for si, spec in enumerate(specs):
        for rep in range(replicates):
            cloud_seed = _derived_seed(base_seed, 0, si, rep)
            est_seed = _derived_seed(base_seed, 1, si, rep)
            seeded = replace(spec, seed=cloud_seed)
            labeled = generate(seeded)
            for method in methods:
                start = time.perf_counter()
                estimate = None
                failure = None
                try:
                    estimate = _estimate_one(
                        method,
                        labeled.cloud,
                        est_seed,
                        mle_k,
                        mle_aggregation,
                        pca_threshold,
                        geomle_config,
                        threads,
                    )
                except IdestError as exc:
                    failure = f"{type(exc).__name__}: {exc}"
                wall = time.perf_counter() - start
                entries.append(
                    BenchmarkEntry(
                        spec=seeded,
                        replicate=rep,
                        method=method,
                        estimate=estimate,
                        true_dim=labeled.true_dim,
                        wall_time=wall,
                        failure=failure,
                    )
                )
    return BenchmarkRun(entries=tuple(entries))


def mpe(run: BenchmarkRun, method: Method) -> float:
    """Mean percentage error of one method: mean of |true - estimate| / true
    over all of its successful entries."""
    values = [
        abs(e.true_dim - e.estimate) / e.true_dim
        for e in run.entries
        if e.method is method and e.estimate is not None
    ]
    if not values:
        raise MissingEntries(f"no successful entries for method {method.value}")
    return float(np.mean(values))


def dolan_more(
    run: BenchmarkRun,
    tau_grid=None,
    ratio_epsilon: float = RATIO_EPSILON,
) -> list[DolanMoreCurve]:
    """Performance-profile curves over the run's problems.

    Per problem the error ratio of a method is its absolute error divided by
    the best method's error (floored at ``ratio_epsilon`` to survive exact
    zero-error ties); failed entries count as infinite ratio.  When
    ``tau_grid`` is None a geometric grid from 1 to the largest finite ratio
    is used; a supplied grid is extended to that maximum so the final
    fraction accounts for every problem with finite ratio.
    """
    methods = run.methods()
    if len(methods) < 2:
        raise ValueError("need at least two methods to compare")
    problems = run.problems()
    table = {}
    for e in run.entries:
        table[(e.spec.name, e.replicate, e.method)] = e
    errors = np.empty((len(problems), len(methods)))
    for i, (name, rep) in enumerate(problems):
        for a, method in enumerate(methods):
            entry = table.get((name, rep, method))
            if entry is None:
                raise MissingEntries(
                    f"method {method.value} has no entry for problem ({name}, {rep})"
                )
            errors[i, a] = entry.abs_error
    best = errors.min(axis=1)
    with np.errstate(invalid="ignore"):
        ratios = errors / np.maximum(best, ratio_epsilon)[:, None]
    finite = ratios[np.isfinite(ratios)]
    max_ratio = float(finite.max()) if finite.size else 1.0
    max_ratio = max(max_ratio, 1.0)
    if tau_grid is None:
        taus = np.geomspace(1.0, max_ratio, 101) if max_ratio > 1.0 else np.array([1.0])
        taus[-1] = max_ratio
    else:
        taus = np.asarray(tau_grid, dtype=np.float64).reshape(-1)
        if taus.size == 0 or np.any(taus < 1.0):
            raise ValueError("tau grid values must be >= 1")
        taus = np.unique(taus)
        if taus[-1] < max_ratio:
            taus = np.append(taus, max_ratio)
    curves = []
    for a, method in enumerate(methods):
        fractions = np.array([np.mean(ratios[:, a] <= tau) for tau in taus])
        curves.append(DolanMoreCurve(method=method, taus=taus, fractions=fractions))
    return curves


def noise_sweep(
    specs: list[ManifoldSpec],
    methods: list[Method],
    sigmas,
    replicates: int,
    base_seed: int,
    **suite_kwargs,
) -> list[NoiseSweepRow]:
    """MPE per (sigma, method) with Gaussian noise added to each cloud.

    Clouds and estimator seeds reuse the run_suite derivation, so the
    sigma = 0 stratum equals the noiseless suite exactly; noise draws are
    independent per (spec, replicate, sigma).  Strata where every entry
    failed are reported as NaN.
    """
    sigmas = [float(s) for s in sigmas]
    if not sigmas:
        raise ValueError("sigmas must be nonempty")
    if any(s < 0 for s in sigmas):
        raise ValueError("sigmas must be nonnegative")
    if not specs:
        raise ValueError("specs must be nonempty")
    if replicates < 1:
        raise ValueError("replicates must be at least 1")

    mle_k = suite_kwargs.pop("mle_k", 20)
    mle_aggregation = suite_kwargs.pop("mle_aggregation", "mean")
    pca_threshold = suite_kwargs.pop("pca_threshold", 0.99)
    geomle_config = suite_kwargs.pop("geomle_config", None) or GeoMleConfig()
    threads = suite_kwargs.pop("threads", 1)
    if suite_kwargs:
        raise TypeError(f"unknown keyword arguments: {sorted(suite_kwargs)}")

    rows = []
    for sigma_index, sigma in enumerate(sigmas):
        per_method: dict[Method, list[float]] = {m: [] for m in methods}
        for si, spec in enumerate(specs):
            for rep in range(replicates):
                cloud_seed = _derived_seed(base_seed, 0, si, rep)
                est_seed = _derived_seed(base_seed, 1, si, rep)
                noise_seed = _derived_seed(base_seed, 2, si, rep, sigma_index)
                labeled = generate(replace(spec, seed=cloud_seed))
                noisy = add_noise(labeled.cloud, sigma, seed=noise_seed)
                for method in methods:
                    try:
                        est = _estimate_one(
                            method,
                            noisy,
                            est_seed,
                            mle_k,
                            mle_aggregation,
                            pca_threshold,
                            geomle_config,
                            threads,
                        )
                    except IdestError:
                        continue
                    per_method[method].append(
                        abs(labeled.true_dim - est) / labeled.true_dim
                    )
        for method in methods:
            values = per_method[method]
            rows.append(
                NoiseSweepRow(
                    sigma=sigma,
                    method=method,
                    mpe=float(np.mean(values)) if values else float("nan"),
                )
            )
    return rows


# ---------------------------------------------------------------------------
# persistence

def write_run_csv(run: BenchmarkRun, path) -> Path:
    """Fixed-column CSV of a run; failed entries leave estimate and
    abs_error blank (reasons are persisted in the JSON form)."""
    path = Path(path)
    lines = [",".join(_RUN_COLUMNS)]
    for e in run.entries:
        estimate = "" if e.estimate is None else repr(float(e.estimate))
        abs_error = "" if e.estimate is None else repr(float(e.abs_error))
        lines.append(
            ",".join(
                [
                    e.spec.name,
                    e.spec.kind.value,
                    str(e.spec.m),
                    str(e.spec.p),
                    str(e.spec.n),
                    str(e.replicate),
                    e.method.value,
                    estimate,
                    abs_error,
                    repr(float(e.wall_time)),
                ]
            )
        )
    path.write_text("\n".join(lines) + "\n")
    return path


def read_run_csv(path) -> BenchmarkRun:
    """Rebuild a run from its CSV for scoring.

    The CSV does not persist generator seeds, so reconstructed specs carry
    seed 0; everything scoring needs (identity, true dimension, estimates)
    survives the round trip.
    """
    path = Path(path)
    try:
        lines = [ln for ln in path.read_text().splitlines() if ln.strip()]
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from exc
    if not lines or lines[0].split(",") != list(_RUN_COLUMNS):
        raise DataFormatError(f"{path} is not a benchmark run CSV")
    entries = []
    for lineno, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(_RUN_COLUMNS):
            raise DataFormatError(f"{path}: row {lineno} has wrong column count")
        try:
            spec = ManifoldSpec(
                kind=Kind(cells[1]),
                m=int(cells[2]),
                p=int(cells[3]),
                n=int(cells[4]),
            )
            entries.append(
                BenchmarkEntry(
                    spec=spec,
                    replicate=int(cells[5]),
                    method=Method(cells[6]),
                    estimate=float(cells[7]) if cells[7] else None,
                    true_dim=int(cells[2]),
                    wall_time=float(cells[9]),
                    failure=None if cells[7] else "recorded in JSON form",
                )
            )
        except (ValueError, KeyError) as exc:
            raise DataFormatError(f"{path}: row {lineno}: {exc}") from exc
    return BenchmarkRun(entries=tuple(entries))


def write_run_json(run: BenchmarkRun, path) -> Path:
    path = Path(path)
    data = [
        {
            "dataset": e.spec.name,
            "kind": e.spec.kind.value,
            "m": e.spec.m,
            "p": e.spec.p,
            "n": e.spec.n,
            "seed": e.spec.seed,
            "replicate": e.replicate,
            "method": e.method.value,
            "estimate": e.estimate,
            "true_dim": e.true_dim,
            "wall_time_s": e.wall_time,
            "failure": e.failure,
        }
        for e in run.entries
    ]
    path.write_text(json.dumps(data, sort_keys=True, indent=1) + "\n")
    return path


def read_run_json(path) -> BenchmarkRun:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"{path} is not valid JSON: {exc}") from exc
    entries = []
    try:
        for item in data:
            spec = ManifoldSpec(
                kind=Kind(item["kind"]),
                m=int(item["m"]),
                p=int(item["p"]),
                n=int(item["n"]),
                seed=int(item["seed"]),
            )
            entries.append(
                BenchmarkEntry(
                    spec=spec,
                    replicate=int(item["replicate"]),
                    method=Method(item["method"]),
                    estimate=None if item["estimate"] is None else float(item["estimate"]),
                    true_dim=int(item["true_dim"]),
                    wall_time=float(item["wall_time_s"]),
                    failure=item["failure"],
                )
            )
    except (KeyError, ValueError, TypeError) as exc:
        raise DataFormatError(f"{path}: bad entry: {exc}") from exc
    return BenchmarkRun(entries=tuple(entries))


def write_dolan_more_csv(curves: list[DolanMoreCurve], path) -> Path:
    path = Path(path)
    lines = ["method,tau,fraction"]
    for curve in curves:
        for tau, frac in zip(curve.taus, curve.fractions):
            lines.append(f"{curve.method.value},{tau!r},{frac!r}")
    path.write_text("\n".join(lines) + "\n")
    return path


def write_noise_csv(rows: list[NoiseSweepRow], path) -> Path:
    path = Path(path)
    lines = ["sigma,method,mpe"]
    for row in rows:
        lines.append(f"{row.sigma!r},{row.method.value},{row.mpe!r}")
    path.write_text("\n".join(lines) + "\n")
    return path
