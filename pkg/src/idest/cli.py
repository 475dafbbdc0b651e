"""Command-line surface: generate, estimate, bench, noise, dolan-more.

Exit codes: 0 success, 1 usage/configuration error, 2 data error,
3 numerical failure.  All outputs are deterministic given the flags; JSON
is emitted with sorted keys.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from . import bench as bench_mod
from . import io as io_mod
from . import svgchart
from .core import GeoMleConfig, Method
from .errors import (
    AllPointsFailed,
    ConfigError,
    DataFormatError,
    DegenerateNeighborhood,
    EmptyBall,
    IdestError,
    KTooLarge,
    MissingEntries,
    RankDeficient,
    SpecError,
    ZeroVariance,
)
from .estimators import PcaConfig, geomle_dataset, mle_dataset, pca_estimate
from .manifolds import Kind, ManifoldSpec, generate, table1_specs

_USAGE_ERRORS = (ConfigError, SpecError, ValueError)
_DATA_ERRORS = (DataFormatError, KTooLarge, MissingEntries)
_NUMERICAL_ERRORS = (
    AllPointsFailed,
    ZeroVariance,
    RankDeficient,
    DegenerateNeighborhood,
    EmptyBall,
)


class _Parser(argparse.ArgumentParser):
    # usage errors must exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _round_half_away(value: float) -> int:
    if value >= 0:
        return int(math.floor(value + 0.5))
    return int(math.ceil(value - 0.5))


def _threads(args) -> int:
    if args.threads is not None:
        value = args.threads
    else:
        env = os.environ.get("IDEST_THREADS")
        value = int(env) if env else 1
    if value < 1:
        raise ValueError(f"threads must be at least 1, got {value}")
    return value


def _parse_sigmas(text: str) -> list[float]:
    """Either 'start:stop:step' or a comma-separated list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"sigma range must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("sigma step must be positive")
        out = []
        v = start
        while v <= stop + 1e-12:
            out.append(round(v, 12))
            v += step
        return out
    return [float(p) for p in text.split(",")]


def _parse_methods(text: str) -> list[Method]:
    methods = []
    for token in text.split(","):
        token = token.strip()
        try:
            methods.append(Method(token))
        except ValueError:
            raise ValueError(f"unknown method {token!r}") from None
    if not methods:
        raise ValueError("methods list is empty")
    return methods


def _suite_specs(args) -> list[ManifoldSpec]:
    if getattr(args, "builtin", None):
        if args.builtin != "table1":
            raise ValueError(f"unknown builtin suite {args.builtin!r}")
        return table1_specs(n=args.n)
    if getattr(args, "suite", None):
        return io_mod.read_suite_file(args.suite)
    if getattr(args, "kind", None):
        return [
            ManifoldSpec(kind=Kind(args.kind), m=args.m, p=args.p, n=args.n, seed=0)
        ]
    raise ValueError("provide --builtin, --suite, or --kind/--m/--p")


def _add_spec_flags(parser, require_kind: bool):
    parser.add_argument(
        "--kind",
        choices=[k.value for k in Kind],
        required=require_kind,
        help="manifold family",
    )
    parser.add_argument("--m", type=int, default=None, help="intrinsic dimension")
    parser.add_argument("--p", type=int, default=None, help="ambient dimension")
    parser.add_argument("--n", type=int, default=1000, help="sample size")


def _add_estimator_flags(parser):
    parser.add_argument("--k", type=int, default=20, help="neighbor count for mle")
    parser.add_argument(
        "--aggregation",
        choices=["mean", "inverse_mean"],
        default="mean",
        help="mle pooling of local estimates",
    )
    parser.add_argument("--k1", type=int, default=10)
    parser.add_argument("--k2", type=int, default=40)
    parser.add_argument("--bootstraps", type=int, default=20)
    parser.add_argument("--degree", type=int, default=2)
    parser.add_argument("--variance-floor", type=float, default=1e-10)
    parser.add_argument("--duplicate-epsilon", type=float, default=1e-12)
    parser.add_argument(
        "--threshold", type=float, default=0.99, help="pca explained-variance threshold"
    )
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--threads", type=int, default=None, help="worker cap (env IDEST_THREADS)"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="idest", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("generate", help="sample a synthetic manifold to CSV")
    _add_spec_flags(gen, require_kind=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True, help="output CSV path")
    gen.add_argument("--header", action="store_true", help="write x0..x{p-1} header")

    est = sub.add_parser("estimate", help="estimate dimension of a CSV point cloud")
    est.add_argument("input", help="CSV file, one point per row")
    est.add_argument(
        "--method", choices=[m.value for m in Method], default="geomle"
    )
    _add_estimator_flags(est)
    est.add_argument("--round", action="store_true", help="round-half-away-from-zero")
    est.add_argument("--out", default=None, help="write JSON report here, not stdout")

    ben = sub.add_parser("bench", help="run an estimation suite over manifolds")
    ben.add_argument("--builtin", choices=["table1"], default=None)
    ben.add_argument("--suite", default=None, help="JSON list of manifold specs")
    _add_spec_flags(ben, require_kind=False)
    ben.add_argument("--methods", default="mle,geomle,pca")
    ben.add_argument("--replicates", type=int, default=10)
    _add_estimator_flags(ben)
    ben.add_argument("--out-dir", default=".", help="directory for run.csv/run.json")

    noi = sub.add_parser("noise", help="MPE versus Gaussian noise level")
    noi.add_argument("--builtin", choices=["table1"], default=None)
    noi.add_argument("--suite", default=None)
    _add_spec_flags(noi, require_kind=False)
    noi.add_argument("--sigmas", default="0:0.05:0.01", help="start:stop:step or list")
    noi.add_argument("--methods", default="mle,geomle")
    noi.add_argument("--replicates", type=int, default=5)
    _add_estimator_flags(noi)
    noi.add_argument("--out-dir", default=".")

    dm = sub.add_parser("dolan-more", help="performance profiles of a saved run")
    dm.add_argument("run", help="run CSV or JSON produced by bench")
    dm.add_argument("--tau-grid", default=None, help="start:stop:step grid of ratios")
    dm.add_argument("--out-dir", default=".")

    return parser


def _geomle_config(args) -> GeoMleConfig:
    return GeoMleConfig(
        k1=args.k1,
        k2=args.k2,
        bootstraps=args.bootstraps,
        degree=args.degree,
        seed=args.seed,
        variance_floor=args.variance_floor,
        duplicate_epsilon=args.duplicate_epsilon,
    )


def _cmd_generate(args) -> int:
    if args.m is None or args.p is None:
        raise ValueError("generate requires --m and --p")
    spec = ManifoldSpec(
        kind=Kind(args.kind), m=args.m, p=args.p, n=args.n, seed=args.seed
    )
    labeled = generate(spec)
    sidecar = io_mod.write_labeled_cloud(labeled, args.out, header=args.header)
    print(sidecar)
    return 0


def _cmd_estimate(args) -> int:
    cloud = io_mod.read_point_cloud_csv(args.input)
    method = Method(args.method)
    if method is Method.MLE:
        report = mle_dataset(
            cloud,
            k=args.k,
            aggregation=args.aggregation,
            duplicate_epsilon=args.duplicate_epsilon,
        )
    elif method is Method.GEOMLE:
        report = geomle_dataset(cloud, _geomle_config(args), threads=_threads(args))
    else:
        report = pca_estimate(cloud, PcaConfig(args.threshold))
    payload = report.to_dict()
    if args.round:
        payload["global_estimate"] = _round_half_away(report.global_estimate)
    text = json.dumps(payload, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
        print(args.out)
    else:
        print(text)
    return 0


def _cmd_bench(args) -> int:
    specs = _suite_specs(args)
    methods = _parse_methods(args.methods)
    run = bench_mod.run_suite(
        specs,
        methods,
        replicates=args.replicates,
        base_seed=args.seed,
        mle_k=args.k,
        mle_aggregation=args.aggregation,
        pca_threshold=args.threshold,
        geomle_config=_geomle_config(args),
        threads=_threads(args),
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = bench_mod.write_run_csv(run, out_dir / "run.csv")
    json_path = bench_mod.write_run_json(run, out_dir / "run.json")
    print(csv_path)
    print(json_path)
    if all(e.estimate is None for e in run.entries):
        raise AllPointsFailed("every suite entry failed")
    return 0


def _cmd_noise(args) -> int:
    specs = _suite_specs(args)
    methods = _parse_methods(args.methods)
    sigmas = _parse_sigmas(args.sigmas)
    rows = bench_mod.noise_sweep(
        specs,
        methods,
        sigmas,
        replicates=args.replicates,
        base_seed=args.seed,
        mle_k=args.k,
        mle_aggregation=args.aggregation,
        pca_threshold=args.threshold,
        geomle_config=_geomle_config(args),
        threads=_threads(args),
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = bench_mod.write_noise_csv(rows, out_dir / "noise.csv")
    series = []
    for method in methods:
        pts = [(r.sigma, r.mpe) for r in rows if r.method is method]
        series.append((method.value, [p[0] for p in pts], [p[1] for p in pts]))
    svg_path = svgchart.write_line_chart(
        series, "MPE versus noise level", "sigma", "MPE", out_dir / "noise.svg"
    )
    print(csv_path)
    print(svg_path)
    return 0


def _cmd_dolan_more(args) -> int:
    run_path = Path(args.run)
    if run_path.suffix == ".json":
        run = bench_mod.read_run_json(run_path)
    else:
        run = bench_mod.read_run_csv(run_path)
    tau_grid = None
    if args.tau_grid:
        tau_grid = _parse_sigmas(args.tau_grid)
    curves = bench_mod.dolan_more(run, tau_grid=tau_grid)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = bench_mod.write_dolan_more_csv(curves, out_dir / "dolan_more.csv")
    series = [(c.method.value, c.taus, c.fractions) for c in curves]
    svg_path = svgchart.write_line_chart(
        series,
        "Performance profiles",
        "tau",
        "fraction of problems",
        out_dir / "dolan_more.svg",
    )
    print(csv_path)
    print(svg_path)
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "estimate": _cmd_estimate,
    "bench": _cmd_bench,
    "noise": _cmd_noise,
    "dolan-more": _cmd_dolan_more,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _NUMERICAL_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except _DATA_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except _USAGE_ERRORS as exc:
        name = type(exc).__name__
        print(f"error: {name}: {exc}" if isinstance(exc, IdestError) else f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
