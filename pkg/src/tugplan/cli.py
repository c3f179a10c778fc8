"""Command-line pipeline: sample scenarios, solve, evaluate.

One command per pipeline stage, composed through JSON artifacts so every
stage can be replayed and audited.  Every artifact embeds the run manifest
(command, inputs, mode, seeds, output path, tool version) and is written with
sorted keys, so identical inputs produce byte-identical files.

Exit codes: 0 success/optimal, 1 usage or input error, 2 infeasible,
3 time limit reached.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .evaluator import out_of_sample
from .formulation import build_deterministic, build_stochastic, write_lp_text
from .instance import (InstanceParseError, InstanceValidationError, PdpNetwork,
                       build_network, load_instance)
from .reporting import evaluation_table, solution_table
from .scenarios import (ScenarioConfig, ScenarioSet, generate_scenarios,
                        scenario_set_from_dict, scenario_set_to_dict)
from .solver import (STATUS_INFEASIBLE, STATUS_OPTIMAL, STATUS_TIME_LIMIT_INCUMBENT,
                     STATUS_TIME_LIMIT_NO_INCUMBENT, SolveConfig, Solution,
                     solve_alpha_zero_fast, solve_deterministic, solve_stochastic)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_TIME_LIMIT = 3


class CliError(Exception):
    """Usage or input problem; message goes to stderr, exit code 1."""


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def _read_json(path: Path, what: str) -> dict:
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise CliError(f"{what} file not found: {path}")
    except json.JSONDecodeError as exc:
        raise CliError(f"{what} file {path} is not valid JSON: {exc}")


def _load_network(path_str: str) -> PdpNetwork:
    path = Path(path_str)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise CliError(f"instance file not found: {path}")
    try:
        return build_network(load_instance(text))
    except (InstanceParseError, InstanceValidationError) as exc:
        raise CliError(f"invalid instance {path}: {exc}")


def _manifest(args: argparse.Namespace, command: str, out: Path) -> dict:
    manifest = {
        "command": command,
        "instance": args.instance,
        "out": str(out),
        "version": __version__,
    }
    # --threads is deliberately absent: results are invariant to it, and the
    # artifact bytes must be too.
    for key in ("mode", "alpha", "scenarios", "scenario_file", "seed",
                "trials", "time_limit", "plan"):
        if hasattr(args, key):
            manifest[key] = getattr(args, key)
    return manifest


def _scenario_set_for(args: argparse.Namespace, network: PdpNetwork) -> tuple[ScenarioSet, dict]:
    if args.scenario_file:
        doc = _read_json(Path(args.scenario_file), "scenario")
        try:
            scen = scenario_set_from_dict(doc, network)
        except (KeyError, ValueError) as exc:
            raise CliError(f"invalid scenario file {args.scenario_file}: {exc}")
        provenance = {"source": "file", "path": args.scenario_file,
                      "count": scen.count, "seed": scen.seed}
        return scen, provenance
    if not args.scenarios:
        raise CliError("stochastic mode needs --scenarios N or --scenario-file PATH")
    config = ScenarioConfig(count=args.scenarios, seed=args.seed)
    scen = generate_scenarios(network, config)
    provenance = {"source": "sampled", "count": config.count, "seed": config.seed}
    return scen, provenance


def _solution_payload(solution: Solution, network: PdpNetwork, manifest: dict,
                      provenance: dict | None) -> dict:
    payload: dict = {
        "manifest": manifest,
        "status": solution.status,
        "alpha": solution.alpha,
        "task_count": network.n,
        "vehicles": network.vehicle_count,
        "objective_m": solution.objective,
        "stats": {
            "nodes_explored": solution.stats.nodes_explored,
            "bound_prunes": solution.stats.bound_prunes,
            "window_prunes": solution.stats.window_prunes,
        },
    }
    if provenance is not None:
        payload["scenario_provenance"] = provenance
    if solution.plan is not None:
        payload["routes_v"] = [list(r) for r in solution.plan.routes]
        payload["routes_v_str"] = solution.plan.route_strings()
        payload["routes_labels"] = solution.plan.label_strings(network)
        schedule = solution.schedule
        payload["schedule"] = {
            "service_times": schedule.times.tolist(),
            "per_scenario": schedule.times.ndim == 3,
        }
        if schedule.ignored is not None:
            payload["schedule"]["ignored_scenarios"] = [
                int(s) for s in schedule.ignored.nonzero()[0]]
    if solution.infeasible_task is not None:
        payload["infeasible_task"] = solution.infeasible_task
    if solution.limiting_scenarios:
        payload["limiting_scenarios"] = list(solution.limiting_scenarios)
    return payload


def _exit_code_for(status: str) -> int:
    return {
        STATUS_OPTIMAL: EXIT_OK,
        STATUS_INFEASIBLE: EXIT_INFEASIBLE,
        STATUS_TIME_LIMIT_INCUMBENT: EXIT_TIME_LIMIT,
        STATUS_TIME_LIMIT_NO_INCUMBENT: EXIT_TIME_LIMIT,
    }[status]


def cmd_solve(args: argparse.Namespace) -> int:
    network = _load_network(args.instance)
    if not (0.0 <= args.alpha < 1.0):
        raise CliError(f"--alpha must be in [0, 1), got {args.alpha}")
    config = SolveConfig(alpha=args.alpha, time_limit=args.time_limit, seed=args.seed)
    out = Path(args.out) if args.out else Path(f"{Path(args.instance).stem}.solution.json")

    provenance = None
    if args.mode == "det":
        solution = solve_deterministic(network, config)
        system_builder = lambda: build_deterministic(network)
    else:
        scen, provenance = _scenario_set_for(args, network)
        if args.mode == "sto-fast":
            if args.alpha != 0.0:
                raise CliError("--mode sto-fast requires --alpha 0")
            solution = solve_alpha_zero_fast(network, scen, config)
        else:
            solution = solve_stochastic(network, scen, config)
        system_builder = lambda: build_stochastic(network, scen, args.alpha)

    if args.export_lp:
        Path(args.export_lp).write_text(write_lp_text(system_builder()), encoding="utf-8")

    manifest = _manifest(args, "solve", out)
    _write_json(out, _solution_payload(solution, network, manifest, provenance))

    if solution.plan is not None:
        print(solution_table(solution.plan.route_strings(),
                             solution.plan.label_strings(network),
                             solution.status, solution.objective))
    else:
        print(solution_table([], [], solution.status, None))
        if solution.infeasible_task:
            print(f"certificate: task {solution.infeasible_task} cannot meet "
                  "its window even on a dedicated vehicle", file=sys.stderr)
        if solution.limiting_scenarios:
            print(f"limiting scenarios: {list(solution.limiting_scenarios)}",
                  file=sys.stderr)
    print(f"artifact: {out}")
    return _exit_code_for(solution.status)


def cmd_evaluate(args: argparse.Namespace) -> int:
    network = _load_network(args.instance)
    if args.trials < 1:
        raise CliError(f"--trials must be >= 1, got {args.trials}")
    plan_doc = _read_json(Path(args.plan), "plan")
    if "routes_v" not in plan_doc:
        raise CliError(f"plan artifact {args.plan} carries no routes "
                       "(was the solve infeasible?)")
    if plan_doc.get("task_count") != network.n:
        raise CliError(
            f"plan/instance mismatch: plan has {plan_doc.get('task_count')} tasks, "
            f"instance has {network.n}")
    routes = [tuple(int(v) for v in r) for r in plan_doc["routes_v"]]
    for route in routes:
        for node in route:
            if not (0 <= node < network.size):
                raise CliError(f"plan route visits unknown node {node}")

    config = ScenarioConfig(count=args.trials, seed=args.seed)
    report = out_of_sample(routes, network, config)

    out = Path(args.out) if args.out else Path(f"{Path(args.plan).stem}.evaluation.json")
    manifest = _manifest(args, "evaluate", out)
    routes_v = ["-".join(str(v) for v in r) for r in routes]
    routes_labels = ["-".join(network.labels[v] for v in r) for r in routes]
    payload = {
        "manifest": manifest,
        "trials": report.trials,
        "seed": report.seed,
        "policy": report.policy,
        "rows": [
            {
                "vehicle": k + 1,
                "route_v": routes_v[k],
                "route_labels": routes_labels[k],
                "failure": report.per_vehicle_failure[k],
                "half_width": report.per_vehicle_half_width[k],
            }
            for k in range(len(routes))
        ],
        "overall": {
            "failure": report.overall_failure,
            "half_width": report.overall_half_width,
        },
    }
    _write_json(out, payload)
    print(evaluation_table(routes_v, routes_labels, report))
    print(f"artifact: {out}")
    return EXIT_OK


def cmd_sample(args: argparse.Namespace) -> int:
    network = _load_network(args.instance)
    if not args.scenarios or args.scenarios < 1:
        raise CliError(f"--scenarios must be >= 1, got {args.scenarios}")
    config = ScenarioConfig(count=args.scenarios, seed=args.seed)
    scen = generate_scenarios(network, config)
    out = Path(args.out) if args.out else Path(f"{Path(args.instance).stem}.scenarios.json")
    payload = scenario_set_to_dict(scen)
    payload["manifest"] = _manifest(args, "sample", out)
    _write_json(out, payload)
    print(f"sampled {scen.count} scenarios (seed {config.seed}) -> {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tugplan",
        description="Pickup-and-delivery route planning for factory logistics "
                    "with scenario-robust scheduling and Monte Carlo evaluation.",
    )
    parser.add_argument("--version", action="version", version=f"tugplan {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    solve = sub.add_parser("solve", help="solve an instance and write a plan artifact")
    solve.add_argument("--instance", required=True, help="instance JSON file")
    solve.add_argument("--mode", choices=["det", "sto", "sto-fast"], default="det")
    solve.add_argument("--alpha", type=float, default=0.0,
                       help="allowed ignored probability mass (stochastic modes)")
    solve.add_argument("--scenarios", type=int, default=0,
                       help="number of travel-time scenarios to sample")
    solve.add_argument("--scenario-file", default=None,
                       help="replay a scenario artifact instead of sampling")
    solve.add_argument("--seed", type=int, default=0, help="scenario sampling seed")
    solve.add_argument("--time-limit", type=float, default=300.0, dest="time_limit")
    solve.add_argument("--threads", type=int, default=1,
                       help="worker cap (results are invariant to it)")
    solve.add_argument("--out", default=None, help="artifact path")
    solve.add_argument("--export-lp", default=None, dest="export_lp",
                       help="also write the constraint system in LP format")
    solve.set_defaults(func=cmd_solve)

    evaluate = sub.add_parser("evaluate", help="Monte Carlo evaluation of a plan artifact")
    evaluate.add_argument("--instance", required=True)
    evaluate.add_argument("--plan", required=True, help="solution artifact from solve")
    evaluate.add_argument("--trials", type=int, default=1000)
    evaluate.add_argument("--seed", type=int, default=0, help="evaluation seed")
    evaluate.add_argument("--threads", type=int, default=1,
                          help="worker cap (results are invariant to it)")
    evaluate.add_argument("--out", default=None)
    evaluate.set_defaults(func=cmd_evaluate)

    sample = sub.add_parser("sample", help="sample scenarios into a replayable artifact")
    sample.add_argument("--instance", required=True)
    sample.add_argument("--scenarios", type=int, required=True)
    sample.add_argument("--seed", type=int, default=0)
    sample.add_argument("--out", default=None)
    sample.set_defaults(func=cmd_sample)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; fold into the documented code.
        return EXIT_USAGE if exc.code not in (0, None) else 0
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
