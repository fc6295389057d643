"""Command-line interface.

Subcommands: gen, spectral, sdp, certify, phase, thresholds.  Outputs land
in --out (default: current directory) as CSV/JSON files; a one-line summary
goes to stdout.  A config file of key=value lines (--config) provides
defaults; explicit flags override it.

Exit codes: 0 success, 2 invalid input, 3 solver non-convergence.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import certify, datagen, experiments, io_utils, sdp, spectral
from .errors import SdpCutError
from .kernel_graph import KernelSpec, PointSet, WeightedGraph, build_graph
from .partition import Partition, ground_truth_x, normalized_cut, partitions_agree, ratio_cut

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NO_CONVERGENCE = 3


def _parse_config(path: str) -> dict:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise SdpCutError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, val = line.partition("=")
        values[key.strip().replace("-", "_")] = _coerce(val.strip())
    return values


def _coerce(text: str):
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def _load_graph(args) -> WeightedGraph:
    if getattr(args, "weights", None):
        return WeightedGraph(io_utils.read_matrix_csv(args.weights))
    if getattr(args, "points", None):
        pts = PointSet(io_utils.read_points_csv(args.points, header=args.header))
        return build_graph(pts, KernelSpec(args.kernel, args.sigma))
    raise SdpCutError("provide --points (with --sigma) or --weights")


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_gen(args) -> int:
    out = _out_dir(args)
    model = args.model
    if model == "circles":
        data = datagen.gen_circles_deterministic(args.n, args.r1, args.kappa)
    elif model == "circles-random":
        data = datagen.gen_circles_random(args.n, args.r1, args.delta, args.seed)
    elif model == "lines":
        data = datagen.gen_lines_deterministic(args.n, args.delta)
    elif model == "lines-random":
        data = datagen.gen_lines_random(args.n, args.delta, args.seed)
    elif model == "balls":
        data = datagen.gen_balls(args.n, args.delta, args.seed)
    elif model == "sbm":
        graph = datagen.gen_sbm(args.n, args.alpha, args.beta, args.seed)
        io_utils.write_matrix_csv(out / "weights.csv", graph.W)
        io_utils.write_labels_csv(out / "labels.csv", graph.truth.labels)
        io_utils.write_json(out / "meta.json", {
            "model": "sbm", "n": args.n, "alpha": args.alpha, "beta": args.beta,
            "p": graph.p, "q": graph.q, "seed": args.seed, "N": graph.W.shape[0],
        })
        print(f"sbm: N={graph.W.shape[0]} p={graph.p:.4f} q={graph.q:.4f} -> {out}")
        return EXIT_OK
    else:  # pragma: no cover - argparse restricts choices
        raise SdpCutError(f"unknown model {model!r}")
    io_utils.write_points_csv(out / "points.csv", data.points.points)
    io_utils.write_labels_csv(out / "labels.csv", data.truth.labels)
    io_utils.write_json(out / "meta.json", {
        "model": data.model, "params": data.params, "seed": data.seed,
        "N": data.points.n,
    })
    print(f"{data.model}: N={data.points.n} -> {out}")
    return EXIT_OK


def cmd_spectral(args) -> int:
    g = _load_graph(args)
    out = _out_dir(args)
    result = spectral.spectral_cluster(g, args.k, args.variant, seed=args.seed,
                                       restarts=args.restarts)
    io_utils.write_labels_csv(out / "labels.csv", result.labels.labels)
    io_utils.write_json(out / "spectral.json", {
        "variant": args.variant, "k": args.k, "objective": result.objective,
        "iterations": result.iterations,
    })
    print(f"spectral: k={args.k} objective={result.objective:.6g} -> {out}")
    return EXIT_OK


def cmd_sdp(args) -> int:
    g = _load_graph(args)
    out = _out_dir(args)
    variant = args.variant
    prob = sdp.make_problem(g, args.k, variant)
    opts = sdp.SolverOptions(tol_primal=args.tol, tol_dual=args.tol,
                             max_iters=args.max_iters, seed=args.seed)
    sol = sdp.solve(prob, opts)
    part = sdp.round_solution(sol, args.k, seed=args.seed)
    io_utils.write_labels_csv(out / "labels.csv", part.labels)
    payload = {
        "variant": variant, "k": args.k,
        "objective": sol.objective,
        "iterations": sol.iterations,
        "converged": sol.converged,
        "primal_residual": sol.primal_residual,
        "dual_residual": sol.dual_residual,
        "feasibility": sol.feasibility_gaps(),
        "rounding_gap": sdp.rounding_gap(sol, part),
    }
    if args.truth:
        truth = Partition.from_labels(io_utils.read_labels_csv(args.truth))
        x = ground_truth_x(g, truth, variant)
        payload["exactness_gap"] = sdp.exactness_gap(sol, x)
        payload["recovered_truth"] = partitions_agree(part, truth)
    io_utils.write_json(out / "sdp.json", payload)
    status = "converged" if sol.converged else "NOT converged"
    print(f"sdp[{variant}]: objective={sol.objective:.6g} {status} "
          f"({sol.iterations} iters) -> {out}")
    return EXIT_OK if sol.converged else EXIT_NO_CONVERGENCE


def cmd_certify(args) -> int:
    g = _load_graph(args)
    out = _out_dir(args)
    labels = io_utils.read_labels_csv(args.labels)
    part = Partition.from_labels(labels)
    report = certify.proximity_check(g, part, args.variant)
    payload = {
        "variant": report.variant,
        "lhs": report.lhs, "rhs": report.rhs, "holds": report.holds,
        "margin": report.margin,
        "lambda2_per_cluster": list(report.lambda2_per_cluster),
        "delta_norm": report.delta_norm,
        "degenerate": report.degenerate,
        "cut_value": (ratio_cut(g, part) if args.variant == "ratiocut"
                      else normalized_cut(g, part)),
    }
    if args.full_certificate:
        cert = certify.build_certificate(g, part, args.variant, z=args.z)
        payload["certificate"] = {
            "z": cert.z,
            "interval": list(cert.interval),
            "checks": {name: {"passed": c.passed, "margin": c.margin}
                       for name, c in cert.checks.items()},
            "all_passed": cert.all_passed,
            "kkt_verified": certify.verify_kkt(g, part, args.variant, cert),
        }
        if args.export_b:
            io_utils.write_matrix_csv(args.export_b, cert.B)
        if args.export_q:
            io_utils.write_matrix_csv(args.export_q, cert.Q)
    io_utils.write_json(out / "certify.json", payload)
    print(f"certify[{args.variant}]: holds={report.holds} "
          f"lhs={report.lhs:.4g} rhs={report.rhs:.4g} -> {out}")
    return EXIT_OK


def cmd_phase(args) -> int:
    out = _out_dir(args)
    deltas = [float(v) for v in args.deltas.split(",")]
    if args.p_values:
        p_values = [float(v) for v in args.p_values.split(",")]
    else:
        p_values = list(range(args.p_min, args.p_max + 1))
    grid = experiments.ExperimentGrid(model=args.model, deltas=tuple(deltas),
                                      p_values=tuple(p_values), n=args.n,
                                      trials=args.trials, mode=args.mode,
                                      seed=args.seed)
    result = experiments.run_grid(grid)
    names = ["ratiocut", "ncut"] + (["sdp"] if grid.mode == "full-sdp" else [])
    for name in names:
        frac = result.fractions(name)
        csv_path = out / f"phase_{args.model}_{name}.csv"
        csv_path.write_text("\n".join(experiments.heatmap_csv_lines(grid, frac)) + "\n")
        mat_path = out / f"phase_{args.model}_{name}.dat"
        mat_path.write_text("\n".join(experiments.gnuplot_matrix_lines(frac)) + "\n")
    io_utils.write_json(out / f"phase_{args.model}_meta.json", {
        "model": args.model, "deltas": deltas, "p_values": p_values,
        "n": args.n, "trials": args.trials, "mode": args.mode, "seed": args.seed,
        "failures": result.failures, "elapsed_seconds": result.elapsed_seconds,
    })
    print(f"phase[{args.model}]: {len(deltas)}x{len(p_values)} cells, "
          f"{args.trials} trials/cell, {result.elapsed_seconds:.1f}s -> {out}")
    return EXIT_OK


def cmd_thresholds(args) -> int:
    out = _out_dir(args)
    params = {}
    for key in ("n", "m", "kappa", "gamma", "delta", "alpha", "beta"):
        val = getattr(args, key, None)
        if val is not None:
            params[key] = val
    rows = experiments.report_thresholds(args.model, params)
    table = [{
        "model": r.model, "params": r.params, "required": r.required,
        "actual": r.actual, "satisfied": r.satisfied, "sigma": r.sigma,
    } for r in rows]
    if args.format == "json":
        io_utils.write_json(out / "thresholds.json", {"rows": table})
    else:
        lines = ["model,required,actual,satisfied,sigma"]
        for r in table:
            lines.append(f"{r['model']},{r['required']:.6g},"
                         f"{'' if r['actual'] is None else format(r['actual'], '.6g')},"
                         f"{'' if r['satisfied'] is None else r['satisfied']},"
                         f"{'' if r['sigma'] is None else format(r['sigma'], '.6g')}")
        (out / "thresholds.csv").write_text("\n".join(lines) + "\n")
    for r in table:
        print(f"{r['model']}: required={r['required']:.4g} actual={r['actual']} "
              f"satisfied={r['satisfied']}")
    return EXIT_OK


def _add_graph_inputs(p: argparse.ArgumentParser):
    p.add_argument("--points", help="points CSV (one row per point)")
    p.add_argument("--header", action="store_true", help="points CSV has a header row")
    p.add_argument("--weights", help="dense weight-matrix CSV")
    p.add_argument("--kernel", choices=["heat", "threshold"], default="heat")
    p.add_argument("--sigma", type=float, default=1.0, help="kernel bandwidth")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sdpcut", description=__doc__)
    parser.add_argument("--config", help="key=value defaults file")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("gen", help="generate a model instance")
    common(p)
    p.add_argument("--model", required=True,
                   choices=["circles", "circles-random", "lines", "lines-random",
                            "balls", "sbm"])
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--r1", type=float, default=1.0)
    p.add_argument("--kappa", type=float, default=1.5)
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--alpha", type=float, default=10.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("spectral", help="two-step spectral clustering")
    common(p)
    _add_graph_inputs(p)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--variant", choices=["unnormalized", "normalized"],
                   default="unnormalized")
    p.add_argument("--restarts", type=int, default=10)
    p.set_defaults(func=cmd_spectral)

    p = sub.add_parser("sdp", help="solve the cut SDP and round")
    common(p)
    _add_graph_inputs(p)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--variant", choices=["ratiocut", "ncut"], default="ratiocut")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--max-iters", type=int, default=5000)
    p.add_argument("--truth", help="labels CSV with the planted partition")
    p.set_defaults(func=cmd_sdp)

    p = sub.add_parser("certify", help="proximity condition and dual certificate")
    common(p)
    _add_graph_inputs(p)
    p.add_argument("--labels", required=True, help="candidate partition labels CSV")
    p.add_argument("--variant", choices=["ratiocut", "ncut"], default="ratiocut")
    p.add_argument("--full-certificate", action="store_true")
    p.add_argument("--z", type=float, default=None, help="dual parameter override")
    p.add_argument("--export-b", help="write the B certificate block to CSV")
    p.add_argument("--export-q", help="write the Q certificate block to CSV")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("phase", help="run a phase-diagram grid")
    common(p)
    p.add_argument("--model", required=True, choices=list(experiments.GRID_MODELS))
    p.add_argument("--deltas", required=True, help="comma-separated separations")
    p.add_argument("--p-values", help="comma-separated bandwidth parameters")
    p.add_argument("--p-min", type=int, default=1)
    p.add_argument("--p-max", type=int, default=10)
    p.add_argument("--n", type=int, default=250)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--mode", choices=["condition-check", "full-sdp"],
                   default="condition-check")
    p.set_defaults(func=cmd_phase)

    p = sub.add_parser("thresholds", help="closed-form recovery thresholds")
    common(p)
    p.add_argument("--model", required=True,
                   choices=["circles", "lines", "sbm", "balls"])
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--kappa", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.set_defaults(func=cmd_thresholds)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    # config file values act as defaults; explicit flags still win
    if "--config" in argv:
        cfg_path = argv[argv.index("--config") + 1]
        try:
            parser.set_defaults(**_parse_config(cfg_path))
        except (OSError, SdpCutError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INVALID
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SdpCutError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
