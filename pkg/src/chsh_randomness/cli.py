"""Command-line front end.

Subcommands::

    curve     --scenario S --runs N|asymptotic --p-min F --p-max F --points K --out PATH [--workers W]
    critical  --scenario S --runs N|asymptotic --target-s F [--tol F]
    strategy  --scenario S --runs N --p F [--split auto|F]
    verify    --scenario S --runs N --p F --oracle greedy|enumerate|alternating [--tol F]
    table

Exit codes: 0 success, 1 oracle disagreement, 2 invalid arguments,
3 infeasible budget.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Optional, Sequence, Union

from . import both_biased, one_biased, oracle, single_run
from .core import (
    P_Q_MULTIPLE_CORRELATED_REFERENCE,
    S_QUANTUM,
    SCENARIOS,
    CurveTable,
    check_budget,
    check_target,
)
from .errors import ArgumentError, ChshError, InfeasibleBudgetError
from .numerics import bisect

EXIT_OK = 0
EXIT_DISAGREE = 1
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3

ASYMPTOTIC = "asymptotic"
MAX_CURVE_RUNS = 1000
DEFAULT_POINTS = 200
DEFAULT_TARGET = float(f"{S_QUANTUM:.12g}")
DEFAULT_TOL = 1e-10

Runs = Union[int, str]


def _runs(text: str) -> Runs:
    if text == ASYMPTOTIC:
        return ASYMPTOTIC
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer or '{ASYMPTOTIC}', got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"run count must be positive, got {value}")
    return value


def _finite_runs(text: str) -> int:
    value = _runs(text)
    if value == ASYMPTOTIC:
        raise argparse.ArgumentTypeError("this command needs a finite run count")
    return value


def scenario_value(scenario: str, runs: Runs, p: float) -> float:
    """Optimal CHSH value for one scenario at budget ``p``."""
    if scenario == "single-uncorrelated":
        return single_run.s_max_single(p)
    if scenario == "single-correlated":
        return single_run.s_max_single(p, correlated=True)
    if scenario == "one-biased":
        if runs == ASYMPTOTIC:
            return one_biased.s_max_one_biased_asymptotic(p)
        return one_biased.s_max_one_biased(runs, p).s
    if scenario == "both-biased":
        if runs == ASYMPTOTIC:
            return both_biased.s_max_both_biased_asymptotic(p)
        return both_biased.s_max_both_biased(runs, p).s
    raise ArgumentError(f"unknown scenario {scenario!r}")


def critical_p(scenario: str, runs: Runs, target: float, tol: float = DEFAULT_TOL) -> float:
    """Smallest budget at which ``scenario`` reaches ``target``."""
    target = check_target(target)
    if scenario == "single-uncorrelated":
        return single_run.critical_p_single(target)
    if scenario == "single-correlated":
        return single_run.critical_p_single(target, correlated=True)
    if runs == ASYMPTOTIC:
        if scenario == "one-biased":
            return one_biased.critical_p_one_biased(target)
        if scenario == "both-biased":
            return both_biased.critical_p_both_biased(target)
        raise ArgumentError(f"unknown scenario {scenario!r}")
    # finite runs: p -> S is continuous and nondecreasing on [1/4, 1/2]
    return bisect(lambda p: scenario_value(scenario, runs, p) - target, 0.25, 0.5, tol / 100.0)


def build_curve(
    scenario: str, runs: Runs, p_min: float, p_max: float, points: int, workers: int = 1
) -> CurveTable:
    check_budget(p_min)
    check_budget(p_max)
    if not p_min < p_max:
        raise ArgumentError(f"need p_min < p_max, got {p_min} >= {p_max}")
    if points < 2:
        raise ArgumentError(f"need at least 2 points, got {points}")
    if runs != ASYMPTOTIC and runs > MAX_CURVE_RUNS:
        raise ArgumentError(f"curves support at most {MAX_CURVE_RUNS} runs, got {runs}")
    step = (p_max - p_min) / (points - 1)
    ps = [p_min + i * step for i in range(points - 1)] + [p_max]
    evaluate = partial(scenario_value, scenario, runs)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(evaluate, ps, chunksize=max(1, points // (4 * workers))))
    else:
        values = [evaluate(p) for p in ps]
    return CurveTable(scenario, runs, list(zip(ps, values)))


def strategy_rows(scenario: str, runs: int, p: float, split: Optional[float] = None):
    """``(side, k, q_k, C(n,k), mass)`` rows of the optimal structured strategy."""
    if scenario == "single-uncorrelated":
        p_a, p_b = single_run.single_run_optimal_split(p)
        runs = 1
        dist_a, dist_b = both_biased.build_strategies_both(1, p_a, p_b)
    elif scenario == "one-biased":
        if split is not None:
            raise ArgumentError("--split applies to the both-biased scenario only")
        report = one_biased.s_max_one_biased(runs, p)
        dist_a, dist_b = report.dist_a, report.dist_b
    elif scenario == "both-biased":
        if split is None:
            report = both_biased.s_max_both_biased(runs, p)
        else:
            check_budget(p, 0.25, 1.0)
            report = both_biased.s_max_both_biased_given_split(runs, split, p / split)
        dist_a, dist_b = report.dist_a, report.dist_b
    else:
        raise ArgumentError(f"no strategy object is built for scenario {scenario!r}")
    rows = []
    for side, dist in (("alice", dist_a), ("bob", dist_b)):
        for k, (q, mass) in enumerate(zip(dist.q, dist.masses())):
            rows.append((side, k, q, math.comb(runs, k), mass))
    return rows


def _strategy_csv(rows) -> str:
    lines = ["side,k,q,multiplicity,mass"]
    lines += [f"{side},{k},{q:.9g},{mult},{mass:.9g}" for side, k, q, mult, mass in rows]
    return "\n".join(lines) + "\n"


def table_rows():
    """Critical budgets for reaching the quantum bound, one row per scenario."""
    return [
        ("single", "correlated", single_run.critical_p_single(S_QUANTUM, correlated=True), "computed"),
        ("single", "uncorrelated", single_run.critical_p_single(S_QUANTUM), "computed"),
        ("multiple", "correlated", P_Q_MULTIPLE_CORRELATED_REFERENCE, "reference"),
        ("multiple", "uncorrelated", both_biased.critical_p_both_biased(S_QUANTUM), "computed"),
        ("multiple", "uncorrelated-one-biased", one_biased.critical_p_one_biased(S_QUANTUM), "computed"),
    ]


def cmd_curve(args) -> int:
    table = build_curve(args.scenario, args.runs, args.p_min, args.p_max, args.points, args.workers)
    text = table.to_csv()
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    return EXIT_OK


def cmd_critical(args) -> int:
    print(f"{critical_p(args.scenario, args.runs, args.target_s, args.tol):.9g}")
    return EXIT_OK


def cmd_strategy(args) -> int:
    split = None if args.split == "auto" else float(args.split)
    sys.stdout.write(_strategy_csv(strategy_rows(args.scenario, args.runs, args.p, split)))
    return EXIT_OK


def cmd_verify(args) -> int:
    n, p, scenario = args.runs, args.p, args.scenario
    extra = []
    if args.oracle == "greedy":
        if scenario != "one-biased":
            raise ArgumentError("the greedy oracle checks the one-biased scenario only")
        structured = one_biased.s_max_one_biased(n, p).s
        value = oracle.greedy_lp_one_biased(n, p)
    elif args.oracle == "enumerate":
        if scenario not in ("one-biased", "both-biased"):
            raise ArgumentError("the enumerate oracle checks the biased scenarios only")
        both = scenario == "both-biased"
        structured = scenario_value(scenario, n, p)
        result = oracle.enumerate_deterministic(n, p, both_sided=both)
        value = result.s
        extra.append(f"all_zero_s={result.all_zero_s:.12g}")
        extra.append(f"all_zero_optimal={'yes' if result.all_zero_optimal else 'no'}")
    else:
        if scenario != "both-biased":
            raise ArgumentError("the alternating oracle checks the both-biased scenario only")
        result = oracle.alternating_opt_both_biased(n, p)
        structured, value = result.structured_s, result.s
        extra.append(f"counterexample={'yes' if result.counterexample else 'no'}")
    diff = abs(value - structured)
    print(f"structured_s={structured:.12g}")
    print(f"oracle_s={value:.12g}")
    print(f"abs_diff={diff:.3g}")
    for line in extra:
        print(line)
    agree = diff <= args.tol and "all_zero_optimal=no" not in extra
    return EXIT_OK if agree else EXIT_DISAGREE


def cmd_table(args) -> int:
    print("runs,inputs,p_q,source")
    for runs, inputs, value, source in table_rows():
        print(f"{runs},{inputs},{value:.9g},{source}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chsh-randomness",
        description="Maximum CHSH value of local models whose input settings are partly adversarial.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_arg(p):
        p.add_argument("--scenario", choices=SCENARIOS, required=True)

    curve = sub.add_parser("curve", help="optimal S on an even grid of budgets, as CSV")
    scenario_arg(curve)
    curve.add_argument("--runs", type=_runs, default=ASYMPTOTIC)
    curve.add_argument("--p-min", type=float, default=0.25)
    curve.add_argument("--p-max", type=float, default=0.5)
    curve.add_argument("--points", type=int, default=DEFAULT_POINTS)
    curve.add_argument("--out", default="-", help="output path, '-' for stdout")
    curve.add_argument("--workers", type=int, default=1)
    curve.set_defaults(func=cmd_curve)

    critical = sub.add_parser("critical", help="smallest budget reaching a target S")
    scenario_arg(critical)
    critical.add_argument("--runs", type=_runs, default=ASYMPTOTIC)
    critical.add_argument("--target-s", type=float, default=DEFAULT_TARGET)
    critical.add_argument("--tol", type=float, default=DEFAULT_TOL)
    critical.set_defaults(func=cmd_critical)

    strategy = sub.add_parser("strategy", help="weight-class table of the optimal strategy")
    scenario_arg(strategy)
    strategy.add_argument("--runs", type=_finite_runs, required=True)
    strategy.add_argument("--p", type=float, required=True)
    strategy.add_argument("--split", default="auto", help="'auto' or Alice's per-run cap p_a")
    strategy.set_defaults(func=cmd_strategy)

    verify = sub.add_parser("verify", help="compare a structured value with a brute-force oracle")
    scenario_arg(verify)
    verify.add_argument("--runs", type=_finite_runs, required=True)
    verify.add_argument("--p", type=float, required=True)
    verify.add_argument("--oracle", choices=("greedy", "enumerate", "alternating"), required=True)
    verify.add_argument("--tol", type=float, default=DEFAULT_TOL)
    verify.set_defaults(func=cmd_verify)

    table = sub.add_parser("table", help="critical budgets for reaching the quantum bound")
    table.set_defaults(func=cmd_table)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "split", "auto") != "auto":
        try:
            float(args.split)
        except ValueError:
            parser.error(f"--split expects 'auto' or a number, got {args.split!r}")
    if getattr(args, "tol", 1.0) <= 0:
        parser.error("--tol must be positive")
    if getattr(args, "workers", 1) < 1:
        parser.error("--workers must be positive")
    try:
        return args.func(args)
    except InfeasibleBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ChshError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
