"""Command-line interface.

Subcommands cover the full workflow: generate an SOD instance (``gen``),
add measured Gaussian noise (``perturb``), decompose a tensor
(``decompose``), align an estimate against the truth (``match``), check
the perturbation bounds on an aligned report (``check``), and run the
benchmark experiments (``experiment``).

Exit codes: 0 on success, 1 on operational errors (bad files, malformed
JSON, solver failures), 2 when ``check`` finds a violated bound (or on
argument errors, per argparse convention).
"""

import argparse
import csv
import json
import os
import sys

from . import experiments, schemas
from .bounds import (
    SpectralSummary,
    check_ada_invariants,
    check_cd_bounds,
    check_rank_one_bounds,
    check_rd_bounds,
)
from .decompose import (
    Decomposition,
    MatchReport,
    ada_sroa_cd,
    match_components,
    sroa_cd,
    sroa_rd,
)
from .errors import OdecoError
from .tensor import SolverConfig, SymmetricTensor

__all__ = ["main"]


def _parse_eigenvalues(text, n):
    """Eigenvalues from a comma-separated list or a file of numbers."""
    if os.path.exists(text):
        with open(text, "r", encoding="utf-8") as fh:
            tokens = fh.read().replace(",", " ").split()
    else:
        tokens = [t for t in text.split(",") if t.strip()]
    try:
        values = tuple(float(t) for t in tokens)
    except ValueError as exc:
        raise OdecoError(f"cannot parse eigenvalues: {exc}") from exc
    if len(values) != n:
        raise OdecoError(f"expected {n} eigenvalues, got {len(values)}")
    return values


def _solver_config(args):
    return SolverConfig(
        restarts=args.restarts,
        max_iters=getattr(args, "max_iters", 500),
        tol=getattr(args, "tol", 1e-8),
        seed=args.seed,
    )


def _truth_document(truth, order):
    pairs = [{"value": p.value, "vector": p.vector.tolist()} for p in truth]
    return {
        "method": "truth",
        "order": order,
        "dim": len(pairs),
        "pairs": pairs,
        "thetas": None,
        "residual": 0.0,
        "step_residuals": [],
    }


def cmd_gen(args):
    if args.n**args.p > experiments.SIZE_CAP:
        raise OdecoError(f"n**p = {args.n ** args.p} is too large to materialize")
    values = _parse_eigenvalues(args.eigenvalues, args.n)
    spec = experiments.InstanceSpec(
        args.n, args.p, values, basis=args.basis, seed=args.seed
    )
    T, truth = experiments.gen_sod(spec)
    schemas.dump_json(T.to_dict(), args.out, kind="tensor")
    if args.truth_out:
        schemas.dump_json(
            _truth_document(truth, args.p), args.truth_out, kind="decomposition"
        )
    return 0


def cmd_perturb(args):
    cfg = SolverConfig(restarts=args.restarts, seed=args.seed)
    E, eps = experiments.gen_perturbation(
        args.n, args.p, args.seed, scale=args.scale, cfg=cfg
    )
    schemas.dump_json(E.to_dict(), args.out, kind="tensor")
    print(json.dumps({"epsilon": eps}))
    return 0


def cmd_decompose(args):
    if args.method == "cd":
        if args.theta is None:
            raise OdecoError("--theta is required for method 'cd'")
    elif args.theta is not None:
        raise OdecoError(f"--theta is not accepted for method {args.method!r}")
    doc = schemas.load_json(args.tensor, kind="tensor")
    T = SymmetricTensor.from_dict(doc)
    cfg = _solver_config(args)
    if args.method == "rd":
        d = sroa_rd(T, cfg)
    elif args.method == "cd":
        d = sroa_cd(T, args.theta, cfg)
    else:
        d = ada_sroa_cd(T, cfg)
    schemas.dump_json(d.to_dict(), args.out, kind="decomposition")
    return 0


def cmd_match(args):
    truth = Decomposition.from_dict(schemas.load_json(args.truth, kind="decomposition"))
    est = Decomposition.from_dict(schemas.load_json(args.est, kind="decomposition"))
    report = match_components(truth, est)
    doc = report.to_dict()
    doc["truth_values"] = [p.value for p in truth.pairs]
    doc["est_values"] = [p.value for p in est.pairs]
    doc["order"] = truth.order
    doc["dim"] = truth.dim
    schemas.validate_document(doc, "match-report")
    if args.out:
        schemas.dump_json(doc, args.out)
    else:
        print(json.dumps(doc, indent=2))
    return 0


def cmd_check(args):
    doc = schemas.load_json(args.report, kind="match-report")
    for key in ("truth_values", "order"):
        if key not in doc:
            raise OdecoError(
                f"report lacks {key!r}; produce it with the 'match' subcommand"
            )
    report = MatchReport.from_dict(doc)
    truth_values = [float(v) for v in doc["truth_values"]]
    s = SpectralSummary.from_values(truth_values, int(doc["order"]))
    if args.theorem == "ada":
        if not args.decomp:
            raise OdecoError("--decomp is required for theorem 'ada'")
        d = Decomposition.from_dict(
            schemas.load_json(args.decomp, kind="decomposition")
        )
        try:
            bound = check_ada_invariants(
                d, s, args.eps, report=report, truth_values=truth_values
            )
        except TypeError as exc:
            raise OdecoError(str(exc)) from exc
    elif args.theorem == "cd":
        bound = check_cd_bounds(report, args.eps, s, truth_values, theta=args.theta)
    elif args.theorem == "rd":
        bound = check_rd_bounds(report, args.eps, s, truth_values, c=args.c)
    else:
        bound = check_rank_one_bounds(report, args.eps, s, truth_values)
    out = bound.to_dict()
    schemas.validate_document(out, "bound-report")
    if args.out:
        schemas.dump_json(out, args.out)
    print(json.dumps(out, indent=2))
    return 0 if bound.passed else 2


def _write_experiment_csv(report, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        if report.experiment_id == "E1":
            hist = report.summary["histogram"]
            writer.writerow(["bin_left", "bin_right", "value_count", "vector_count"])
            edges = hist["edges"]
            for i in range(len(edges) - 1):
                writer.writerow(
                    [
                        edges[i],
                        edges[i + 1],
                        hist["value_counts"][i],
                        hist["vector_counts"][i],
                    ]
                )
        elif report.experiment_id == "E2":
            writer.writerow(
                ["index", "metric_constrained", "metric_orthogonal", "difference"]
            )
            for r in report.records:
                writer.writerow(
                    [
                        r["index"],
                        r["metric_constrained"],
                        r["metric_orthogonal"],
                        r["difference"],
                    ]
                )
        else:
            raise OdecoError("experiment 3 has no tabular form; use --out for JSON")


def cmd_experiment(args):
    instances = args.instances
    if instances is None and args.quick:
        instances = 200 if args.id != "3" else 1
    cfg = SolverConfig(restarts=args.restarts, seed=args.seed)
    report = experiments.run_experiment(
        args.id, instances=instances, cfg=cfg, seed=args.seed, workers=args.workers
    )
    doc = report.to_dict()
    schemas.validate_document(doc, "experiment-report")
    if args.out:
        schemas.dump_json(doc, args.out)
    if args.csv:
        _write_experiment_csv(report, args.csv)
    print(json.dumps({"experiment_id": report.experiment_id, "summary": doc["summary"]}, indent=2))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="odeco",
        description="Decompose (nearly) orthogonally decomposable symmetric "
        "tensors and check the recovery guarantees.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an SOD tensor")
    p.add_argument("--n", type=int, required=True, help="dimension")
    p.add_argument("--p", type=int, required=True, help="order")
    p.add_argument(
        "--eigenvalues",
        required=True,
        help="comma-separated values, or a file containing them",
    )
    p.add_argument("--basis", choices=["identity", "random"], default="identity")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="tensor JSON output path")
    p.add_argument("--truth-out", help="write the generating pairs as JSON")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("perturb", help="generate symmetrized Gaussian noise")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--restarts", type=int, default=50, help="for the norm estimate")
    p.add_argument("--out", required=True, help="tensor JSON output path")
    p.set_defaults(fn=cmd_perturb)

    p = sub.add_parser("decompose", help="run a deflation method")
    p.add_argument("--tensor", required=True, help="tensor JSON input path")
    p.add_argument("--method", choices=["rd", "cd", "ada"], required=True)
    p.add_argument("--theta", type=float, help="overlap cap (cd only)")
    p.add_argument("--restarts", type=int, default=50)
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="decomposition JSON output path")
    p.set_defaults(fn=cmd_decompose)

    p = sub.add_parser("match", help="align an estimate against the truth")
    p.add_argument("--truth", required=True, help="decomposition JSON (truth)")
    p.add_argument("--est", required=True, help="decomposition JSON (estimate)")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.set_defaults(fn=cmd_match)

    p = sub.add_parser("check", help="check perturbation bounds on a match report")
    p.add_argument(
        "--theorem", choices=["rd", "cd", "ada", "rank1"], required=True
    )
    p.add_argument("--eps", type=float, required=True, help="measured noise norm")
    p.add_argument("--report", required=True, help="match report JSON path")
    p.add_argument("--theta", type=float, help="overlap cap used (cd)")
    p.add_argument("--decomp", help="decomposition JSON with theta chain (ada)")
    p.add_argument("--c", type=float, default=0.05, help="rd threshold constant")
    p.add_argument("--out", help="also write the bound report here")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("experiment", help="run a benchmark experiment")
    p.add_argument("id", choices=["1", "2", "3"], help="experiment number")
    p.add_argument("--instances", type=int, help="override the instance count")
    p.add_argument(
        "--quick", action="store_true", help="200 instances instead of 1000"
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=50)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="report JSON output path")
    p.add_argument("--csv", help="tabular output path (experiments 1 and 2)")
    p.set_defaults(fn=cmd_experiment)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except OdecoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
