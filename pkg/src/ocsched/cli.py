"""Command-line interface.

Subcommands: gen, decompose, schedule, bounds, degree-prob, experiment,
verify.  Exit codes: 0 success, 1 validation failure, 2 I/O error.
"""

from __future__ import annotations

import argparse
import sys

from ocsched.baseline import baseline_schedule
from ocsched.bounds import combined_lower_bound, degree_prob_exact, degree_prob_model, estimate_degree_prob
from ocsched.decompose import decompose
from ocsched.harness import parse_config_file, run_experiment, spectra
from ocsched.matrix import (
    MatrixFormatError,
    PermutationMatching,
    WeightedDecomposition,
    load_matrix,
    save_matrix,
)
from ocsched.schedule import load_schedule, makespan, save_schedule, verify
from ocsched.workloads import BenchmarkSpec, WorkloadKind, gen_benchmark, gen_synthetic_skewed, load_csv


def save_decomposition(dec: WeightedDecomposition, n: int, path) -> None:
    """Decomposition file: header 'k,n', then one 'weight,targets...' line each."""
    with open(path, "w") as f:
        f.write(f"{len(dec)},{n}\n")
        for m, w in zip(dec.matchings, dec.weights):
            f.write(",".join([repr(w)] + [str(t) for t in m.targets]) + "\n")


def load_decomposition(path) -> WeightedDecomposition:
    with open(path) as f:
        lines = [ln.strip() for ln in f if ln.strip()]
    k, n = (int(x) for x in lines[0].split(","))
    matchings = []
    weights = []
    for line in lines[1 : 1 + k]:
        parts = line.split(",")
        weights.append(float(parts[0]))
        targets = tuple(int(t) for t in parts[1:])
        if len(targets) != n:
            raise ValueError(f"{path}: expected {n} targets, got {len(targets)}")
        matchings.append(PermutationMatching(targets))
    return WeightedDecomposition(tuple(matchings), tuple(weights))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ocsched", description="Parallel optical circuit switch scheduling toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a workload matrix CSV")
    p_gen.add_argument("--kind", default="benchmark", choices=[k.value for k in WorkloadKind])
    p_gen.add_argument("--n", type=int, default=100)
    p_gen.add_argument("--flows", type=int, default=16)
    p_gen.add_argument("--ring-weight", type=float, default=0.7)
    p_gen.add_argument("--background-flows", type=int, default=4)
    p_gen.add_argument("--noise-sigma", type=float, default=0.003)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--input", help="input CSV for csv_* kinds")
    p_gen.add_argument("--output", required=True)

    p_dec = sub.add_parser("decompose", help="matrix CSV -> decomposition file")
    p_dec.add_argument("matrix")
    p_dec.add_argument("--output", required=True)

    p_sched = sub.add_parser("schedule", help="matrix CSV -> schedule file")
    p_sched.add_argument("matrix")
    p_sched.add_argument("--s", type=int, required=True)
    p_sched.add_argument("--delta", type=float, required=True)
    p_sched.add_argument("--no-equalize", action="store_true")
    p_sched.add_argument("--algorithm", default="spectra", choices=["spectra", "baseline"])
    p_sched.add_argument("--output", required=True)

    p_bounds = sub.add_parser("bounds", help="matrix CSV -> per-line bound CSV")
    p_bounds.add_argument("matrix")
    p_bounds.add_argument("--s", type=int, required=True)
    p_bounds.add_argument("--delta", type=float, required=True)
    p_bounds.add_argument("--output")

    p_dp = sub.add_parser("degree-prob", help="exact/model/Monte-Carlo degree probability")
    p_dp.add_argument("--n", type=int, required=True)
    p_dp.add_argument("--k", type=int, required=True)
    p_dp.add_argument("--trials", type=int, default=1000)
    p_dp.add_argument("--seed", type=int, default=0)

    p_exp = sub.add_parser("experiment", help="run a sweep from a config file")
    p_exp.add_argument("config")
    p_exp.add_argument("--output", help="override the config's output path")
    p_exp.add_argument("--seed", type=int, help="master seed base override")

    p_verify = sub.add_parser("verify", help="check a schedule file covers a matrix")
    p_verify.add_argument("matrix")
    p_verify.add_argument("schedule")
    p_verify.add_argument("--tol", type=float, default=1e-9)

    return parser


def _cmd_gen(args) -> int:
    kind = WorkloadKind(args.kind)
    if kind == WorkloadKind.BENCHMARK:
        D = gen_benchmark(
            BenchmarkSpec(
                n=args.n,
                flows_per_port=args.flows,
                large_count=min(4, args.flows),
                small_count=args.flows - min(4, args.flows),
                noise_sigma=args.noise_sigma,
                seed=args.seed,
            )
        )
    elif kind == WorkloadKind.SYNTHETIC_SKEWED:
        D = gen_synthetic_skewed(
            n=args.n,
            ring_weight=args.ring_weight,
            background_flows=args.background_flows,
            seed=args.seed,
            noise_sigma=args.noise_sigma,
        )
    else:
        if not args.input:
            print("csv_* kinds require --input", file=sys.stderr)
            return 1
        D = load_csv(args.input, kind=kind, noise_sigma=args.noise_sigma, seed=args.seed)
    save_matrix(D, args.output)
    return 0


def _cmd_decompose(args) -> int:
    D = load_matrix(args.matrix)
    result = decompose(D)
    save_decomposition(result.decomposition, D.n, args.output)
    print(
        f"k={result.rounds} total_weight={result.refined_weight_total:.6g} "
        f"(initial {result.initial_weight_total:.6g})"
    )
    return 0


def _cmd_schedule(args) -> int:
    D = load_matrix(args.matrix)
    if args.algorithm == "baseline":
        sched = baseline_schedule(D, args.s, args.delta)
    else:
        sched = spectra(D, args.s, args.delta, equalize_enabled=not args.no_equalize)
    save_schedule(sched, args.output)
    print(f"makespan={makespan(sched):.6g}")
    return 0


def _cmd_bounds(args) -> int:
    D = load_matrix(args.matrix)
    report = combined_lower_bound(D, args.s, args.delta)
    lines = ["line_index,kind,k,w,lb1,lb2,combined"]
    for stats, v1, v2 in report.per_line:
        kind = "row" if stats.index < D.n else "col"
        v2_str = "" if v2 is None else repr(v2)
        lines.append(f"{stats.index},{kind},{stats.k},{stats.w!r},{v1!r},{v2_str},{report.combined!r}")
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_degree_prob(args) -> int:
    exact = degree_prob_exact(args.n, args.k)
    model = degree_prob_model(args.n, args.k)
    mc = estimate_degree_prob(args.n, args.k, args.trials, args.seed)
    print("exact_line_prob,model_degree_prob,monte_carlo_degree_prob")
    print(f"{exact!r},{model!r},{mc!r}")
    return 0


def _cmd_experiment(args) -> int:
    overrides = {}
    if args.output:
        overrides["output"] = args.output
    if args.seed is not None:
        overrides["seed_base"] = str(args.seed)
    cfg = parse_config_file(args.config, overrides)
    rows = run_experiment(cfg)
    print(f"{len(rows)} result rows" + (f" -> {cfg.output_path}" if cfg.output_path else ""))
    return 0


def _cmd_verify(args) -> int:
    D = load_matrix(args.matrix)
    sched = load_schedule(args.schedule)
    if verify(sched, D, args.tol):
        print("PASS: schedule covers the demand matrix")
        return 0
    print("FAIL: schedule does not cover the demand matrix", file=sys.stderr)
    return 1


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 1 if e.code not in (0, None) else 0
    handlers = {
        "gen": _cmd_gen,
        "decompose": _cmd_decompose,
        "schedule": _cmd_schedule,
        "bounds": _cmd_bounds,
        "degree-prob": _cmd_degree_prob,
        "experiment": _cmd_experiment,
        "verify": _cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except (MatrixFormatError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    raise SystemExit(cli_main())


if __name__ == "__main__":
    main()
