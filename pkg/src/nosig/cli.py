"""Command line entry point: plan | simulate | analyze | transpile-verify | report.

Exit codes: 0 success, 1 usage error, 2 invalid input, 3 failed numerical check.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import rng
from .datafiles import CountsFile, RunConfig, ValidationError
from .plan import TEST_DISTANCE, ExperimentPlan, make_plan
from .report import build_report, dumps_report, per_job_csv, render_table
from .simulator import IDEAL, NoiseConfig, simulate_plan
from .stats import DEFAULT_LOOK_ELSEWHERE
from .topology import CouplingGraph, pairs_at_distance, select_disjoint
from .transpiler import verify_identities

EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _seed(text: str) -> int:
    try:
        return rng.check_seed(int(text, 0))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ValidationError(f"{path}: no such file") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON ({exc})") from None


def cmd_plan(args) -> int:
    graph = CouplingGraph.from_dict(_read_json(args.device))
    if not graph.name:
        graph.name = Path(args.device).stem
    distance = args.distance if args.distance is not None else TEST_DISTANCE[args.test]
    if distance != TEST_DISTANCE[args.test]:
        raise UsageError(f"test {args.test} runs at distance {TEST_DISTANCE[args.test]}, not {distance}")
    pairs = select_disjoint(pairs_at_distance(graph, distance), limit=args.max_pairs)
    plan = make_plan(args.test, args.reps, args.shots, args.jobs, args.seed, pairs, device=graph.name)
    Path(args.output).write_text(plan.dumps())
    print(f"{args.output}: test {plan.test}, {len(pairs)} pair(s), {plan.jobs} jobs x "
          f"{plan.circuits_per_job} circuits x {plan.shots} shots")
    return 0


def cmd_simulate(args) -> int:
    config = RunConfig(args.plan, args.noise, args.seed, args.output, args.workers)
    config.validate()
    plan = ExperimentPlan.from_dict(_read_json(config.plan_path))
    noise = NoiseConfig.from_dict(_read_json(config.noise_path)) if config.noise_path else IDEAL
    tables = simulate_plan(plan, noise, config.seed, workers=config.workers)
    CountsFile(plan.device or "simulator", plan.test, tables).write(config.output)
    print(f"{config.output}: {len(tables)} (pair, job) tables")
    return 0


def cmd_analyze(args) -> int:
    counts = CountsFile.read(args.counts)
    freqs = {}
    if args.device:
        freqs = CouplingGraph.from_dict(_read_json(args.device)).freqs_mhz
    report = build_report(counts.tables, args.bonferroni_m, freqs, device=counts.device)
    out = Path(args.output)
    out.write_text(dumps_report(report))
    table_path = Path(args.table) if args.table else out.with_suffix(".txt")
    table_path.write_text(render_table(report))
    if args.per_job_csv:
        Path(args.per_job_csv).write_text(per_job_csv(counts.tables))
    print(f"{out}: {len(report['pairs'])} pair(s); table in {table_path}")
    return 0


def cmd_transpile_verify(args) -> int:
    results = verify_identities(args.tol)
    width = max(map(len, results))
    for name, ok in results.items():
        print(f"{name.ljust(width)}  {'ok' if ok else 'FAIL'}")
    return 0 if all(results.values()) else EXIT_NUMERICAL


def cmd_report(args) -> int:
    report = _read_json(args.report)
    if not isinstance(report, dict) or report.get("schema") != "report/1":
        raise ValidationError(f"{args.report}: not a report/1 file")
    if args.format == "paper-table":
        sys.stdout.write(render_table(report))
    else:
        sys.stdout.write(dumps_report(report))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nosig", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("plan", help="build a shuffled job plan from a coupling map")
    p.add_argument("--device", required=True, help="coupling-map JSON")
    p.add_argument("--test", required=True, choices=sorted(TEST_DISTANCE))
    p.add_argument("--distance", type=int, choices=(2, 4))
    p.add_argument("--jobs", type=int, default=60)
    p.add_argument("--shots", type=int, default=20000)
    p.add_argument("--reps", type=int, default=25)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--max-pairs", type=int)
    p.add_argument("-o", "--output", default="plan.json")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("simulate", help="sample counts for every circuit of a plan")
    p.add_argument("--plan", required=True)
    p.add_argument("--noise", help="noise JSON (default: ideal)")
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-o", "--output", default="counts.json")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="CHSH and no-signaling statistics per pair")
    p.add_argument("--counts", required=True)
    p.add_argument("--bonferroni-m", type=int, default=DEFAULT_LOOK_ELSEWHERE)
    p.add_argument("--device", help="coupling-map JSON with qubit frequencies")
    p.add_argument("-o", "--output", default="report.json")
    p.add_argument("--table", help="table path (default: report path with .txt)")
    p.add_argument("--per-job-csv")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("transpile-verify", help="check the ECR/CNOT identities numerically")
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_transpile_verify)

    p = sub.add_parser("report", help="render a report")
    p.add_argument("--report", required=True)
    p.add_argument("--format", choices=("paper-table", "json"), default="paper-table")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "bonferroni_m", 1) < 1:
        print("nosig: error: --bonferroni-m must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"nosig: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"nosig: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
