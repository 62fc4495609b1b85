"""Command-line front end and seeded batch experiments.

Subcommands compose through the instance file format on standard streams
("-" means stdin/stdout), so e.g. ``netprice gen --family spider --k 3 |
netprice oracle`` works. The experiment runner emits plot-ready CSV whose
rows are pure functions of their seed: identical invocations produce
byte-identical output, and any row is re-derivable by running the matching
single-instance subcommand with the row's seed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .algorithms import (
    PricingResult,
    ba_single_price,
    best_single_price,
    degree_bound,
    er_single_price,
    forest_single_price,
    greedy_iterative,
    min_degree_independent,
    split_dp,
)
from .core import PncInstance, dumps_instance, load_instance, loads_instance
from .engine import simulate
from .generators import GenSpec, gen_ba, gen_er, gen_forest
from .oracle import OracleBudgetError, OracleConfig, exact_opt
from .reduction import (
    CnfError,
    artifact_metadata,
    build_reduction,
    parse_dimacs,
    verify_gadget_claims,
)

EXPERIMENT_FAMILIES = ("forest_ratio", "er_ratio", "ba_ratio", "bound_sweep")


@dataclass(frozen=True)
class ExperimentSpec:
    """A seeded batch run: experiment tag, trial count, and family parameters.

    Seeds may be given explicitly; otherwise trial t uses master_seed + t
    (bound_sweep enumerates its (n, trial) grid in that order).
    """

    experiment: str
    trials: int = 20
    master_seed: int = 0
    params: dict = field(default_factory=dict)
    output: str | None = None
    seeds: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.experiment not in EXPERIMENT_FAMILIES:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.seeds is not None and len(self.seeds) != self.trials:
            raise ValueError("explicit seeds must match the trial count")

    def seed_list(self) -> tuple[int, ...]:
        if self.seeds is not None:
            return self.seeds
        return tuple(self.master_seed + t for t in range(self.trials))


EXPERIMENT_DEFAULTS = {
    "forest_ratio": {"n": 12, "trees": 2, "oracle_limit": 14},
    "er_ratio": {"n": 2000, "eta": 0.3, "delta": 0.1},
    "ba_ratio": {"n": 5000, "beta": 3},
    "bound_sweep": {"n_min": 6, "n_max": 14, "eta": 0.4},
}

EXPERIMENT_HEADERS = {
    "forest_ratio": ["seed", "n", "edges", "price", "single_revenue", "oracle_revenue", "opt_over_single"],
    "er_ratio": ["seed", "n", "edges", "price", "single_revenue", "greedy_revenue", "edge_ratio"],
    "ba_ratio": [
        "seed", "n", "edges", "price", "single_revenue", "greedy_revenue",
        "min_degree_fraction", "gamma_independent",
    ],
    "bound_sweep": ["seed", "n", "edges", "oracle_revenue", "degree_bound", "log_cap", "cap_over_opt"],
}


def _fmt(value: float) -> str:
    return f"{value:.6f}"


def _forest_ratio_trial(seed: int, params: dict) -> list[str]:
    n = params["n"]
    instance = gen_forest(n, params["trees"], seed)
    result = forest_single_price(instance)
    row = [str(seed), str(n), str(instance.graph.edge_count), str(result.prices[0]), str(result.revenue)]
    if n <= params["oracle_limit"]:
        opt = exact_opt(instance).revenue
        row.append(str(opt))
        row.append(_fmt(opt / result.revenue) if result.revenue else "")
    else:
        row.extend(["", ""])
    return row


def _er_ratio_trial(seed: int, params: dict) -> list[str]:
    n = params["n"]
    instance = gen_er(n, params["eta"], seed)
    result = er_single_price(instance, params["eta"], params["delta"])
    greedy = greedy_iterative(instance)
    edges = instance.graph.edge_count
    ratio = _fmt(2 * edges / result.revenue) if result.revenue else ""
    return [
        str(seed), str(n), str(edges), str(result.prices[0]),
        str(result.revenue), str(greedy.revenue), ratio,
    ]


def _ba_ratio_trial(seed: int, params: dict) -> list[str]:
    n = params["n"]
    beta = params["beta"]
    instance = gen_ba(n, beta, seed)
    single = ba_single_price(instance, beta)
    greedy = greedy_iterative(instance)
    degrees = instance.graph.degrees
    fraction = sum(1 for d in degrees if d == beta) / n
    independent = min_degree_independent(instance.graph)
    return [
        str(seed), str(n), str(instance.graph.edge_count), str(beta),
        str(single.revenue), str(greedy.revenue), _fmt(fraction), str(int(independent)),
    ]


def _bound_sweep_trial(seed: int, params: dict) -> list[str]:
    n = params["n"]
    instance = gen_er(n, params["eta"], seed)
    opt = exact_opt(instance).revenue
    bound = degree_bound(instance)
    cap = (1 + math.log(n)) * bound
    ratio = _fmt(cap / opt) if opt else ""
    return [
        str(seed), str(n), str(instance.graph.edge_count),
        str(opt), str(bound), _fmt(cap), ratio,
    ]


_TRIAL_BUILDERS = {
    "forest_ratio": _forest_ratio_trial,
    "er_ratio": _er_ratio_trial,
    "ba_ratio": _ba_ratio_trial,
    "bound_sweep": _bound_sweep_trial,
}


def _run_trial(task: tuple[str, int, dict]) -> list[str]:
    experiment, seed, params = task
    return _TRIAL_BUILDERS[experiment](seed, params)


def experiment_tasks(spec: ExperimentSpec) -> list[tuple[str, int, dict]]:
    """The (experiment, seed, params) list for a spec, in deterministic order."""
    params = dict(EXPERIMENT_DEFAULTS[spec.experiment])
    params.update(spec.params)
    if spec.experiment == "bound_sweep":
        sizes = range(params["n_min"], params["n_max"] + 1)
        tasks = []
        index = 0
        for n in sizes:
            for _ in range(spec.trials):
                per_row = dict(params)
                per_row["n"] = n
                tasks.append((spec.experiment, spec.master_seed + index, per_row))
                index += 1
        return tasks
    return [(spec.experiment, seed, params) for seed in spec.seed_list()]


def run_experiment(spec: ExperimentSpec, jobs: int | None = None) -> str:
    """Run a spec's trials (optionally in parallel) and return CSV text.

    Trials are pure functions of their seed, so parallel execution merges
    results in seed order and the output is byte-reproducible.
    """
    if jobs is None:
        jobs = int(os.environ.get("NETPRICE_JOBS", "1"))
    if jobs < 1:
        raise ValueError("jobs must be at least 1")
    tasks = experiment_tasks(spec)
    if jobs == 1 or len(tasks) == 1:
        rows = [_run_trial(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_trial, tasks))
    lines = [",".join(EXPERIMENT_HEADERS[spec.experiment])]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _read_instance(path: str) -> PncInstance:
    if path == "-":
        return loads_instance(sys.stdin.read())
    return load_instance(path)


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _write_text(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _gen_params(args: argparse.Namespace) -> dict:
    family = "split" if args.family == "core_peripheral" else args.family
    required = {
        "er": ("n", "eta"),
        "ba": ("n", "beta"),
        "spider": ("k",),
        "example1": ("k",),
        "split": ("n",),
        "forest": ("n",),
    }[family]
    for name in required:
        if getattr(args, name) is None:
            raise ValueError(f"--{name} is required for family {args.family!r}")
    if family == "er":
        return {"n": args.n, "eta": args.eta}
    if family == "ba":
        return {"n": args.n, "beta": args.beta}
    if family in ("spider", "example1"):
        return {"k": args.k}
    if family == "split":
        return {"n": args.n, "clique_fraction": args.clique_fraction, "edge_prob": args.edge_prob}
    return {"n": args.n, "tree_count": args.trees}


def _cmd_gen(args: argparse.Namespace) -> int:
    spec = GenSpec(args.family, _gen_params(args), args.seed)
    _write_text(dumps_instance(spec.build()), args.out)
    return 0


def _trace_json(prices: tuple[int, ...], trace) -> dict:
    return {
        "prices": list(prices),
        "rounds": [
            {"price": sale.price, "buyers": sorted(sale.buyers), "revenue": sale.revenue}
            for sale in trace.rounds
        ],
        "total_revenue": trace.total_revenue,
        "unsold": sorted(trace.residual),
    }


def _print_trace(prices: tuple[int, ...], trace) -> None:
    print(f"{'round':>5} {'price':>14} {'buyers':>7} {'revenue':>14}")
    for index, sale in enumerate(trace.rounds):
        print(f"{index:>5} {sale.price:>14} {len(sale.buyers):>7} {sale.revenue:>14}")
    print(f"total revenue: {trace.total_revenue}")
    print(f"unsold: {len(trace.residual)}")


def _cmd_simulate(args: argparse.Namespace) -> int:
    instance = _read_instance(args.instance)
    prices = tuple(args.prices)
    trace = simulate(instance, prices)
    if args.json:
        print(json.dumps(_trace_json(prices, trace)))
    else:
        _print_trace(prices, trace)
    return 0


def _strategy_result(args: argparse.Namespace, instance: PncInstance) -> PricingResult:
    if args.strategy == "greedy":
        return greedy_iterative(instance)
    if args.strategy == "single":
        return best_single_price(instance)
    if args.strategy == "forest-single":
        return forest_single_price(instance)
    return split_dp(instance)


def _cmd_strategy(args: argparse.Namespace) -> int:
    instance = _read_instance(args.instance)
    result = _strategy_result(args, instance)
    if args.json:
        print(json.dumps(_trace_json(result.prices, result.trace)))
    else:
        print(f"prices: {' '.join(str(p) for p in result.prices)}")
        print(f"revenue: {result.revenue}")
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    instance = _read_instance(args.instance)
    config = OracleConfig(state_budget=args.state_budget, node_limit=args.node_limit)
    result = exact_opt(instance, config)
    if args.json:
        print(json.dumps({
            "revenue": result.revenue,
            "prices": list(result.prices),
            "states": result.states_explored,
        }))
    else:
        print(f"prices: {' '.join(str(p) for p in result.prices)}")
        print(f"revenue: {result.revenue}")
        print(f"states: {result.states_explored}")
    return 0


def _cmd_reduce(args: argparse.Namespace) -> int:
    artifact = build_reduction(parse_dimacs(_read_text(args.cnf)))
    metadata = artifact_metadata(artifact)
    if args.json:
        combined = {"instance": json.loads(dumps_instance(artifact.instance)), "metadata": metadata}
        _write_text(json.dumps(combined) + "\n", args.out)
    else:
        _write_text(dumps_instance(artifact.instance), args.out)
    if args.meta is not None:
        _write_text(json.dumps(metadata, indent=2) + "\n", args.meta)
    return 0


def _cmd_verify_gadgets(args: argparse.Namespace) -> int:
    artifact = build_reduction(parse_dimacs(_read_text(args.cnf)))
    report = verify_gadget_claims(artifact)
    if args.json:
        print(json.dumps({
            "ok": report.ok,
            "checks": [
                {
                    "gadget": check.gadget,
                    "prices": list(check.prices),
                    "expected_revenue": check.expected_revenue,
                    "observed_revenue": check.observed_revenue,
                    "expected_sold": [[label, sold] for label, sold in check.expected_sold],
                    "observed_sold": [[label, sold] for label, sold in check.observed_sold],
                    "passed": check.passed,
                }
                for check in report.checks
            ],
        }))
    else:
        print(report.describe())
    return 0 if report.ok else 1


def _cmd_experiment(args: argparse.Namespace) -> int:
    params = {}
    for name in ("n", "eta", "delta", "beta", "trees", "oracle_limit", "n_min", "n_max"):
        value = getattr(args, name)
        if value is not None:
            params[name] = value
    spec = ExperimentSpec(
        experiment=args.family,
        trials=args.trials,
        master_seed=args.master_seed,
        params=params,
        output=None if args.out == "-" else args.out,
    )
    _write_text(run_experiment(spec, jobs=args.jobs), args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netprice",
        description="Iterative pricing under negative network externalities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate an instance from a graph family")
    gen.add_argument("--family", required=True,
                     choices=["er", "ba", "spider", "example1", "split", "core_peripheral", "forest"])
    gen.add_argument("--n", type=int)
    gen.add_argument("--eta", type=float)
    gen.add_argument("--beta", type=int)
    gen.add_argument("--k", type=int)
    gen.add_argument("--clique-fraction", type=float, default=0.3)
    gen.add_argument("--edge-prob", type=float, default=0.5)
    gen.add_argument("--trees", type=int, default=1)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default="-")
    gen.set_defaults(handler=_cmd_gen)

    sim = sub.add_parser("simulate", help="replay a price sequence on an instance")
    sim.add_argument("instance", nargs="?", default="-")
    sim.add_argument("--prices", type=int, nargs="+", required=True)
    sim.add_argument("--json", action="store_true")
    sim.set_defaults(handler=_cmd_simulate)

    for name, help_text in [
        ("greedy", "iterative argmax pricing (2-approximation)"),
        ("single", "best single posted price"),
        ("forest-single", "better of prices 1 and 2 on a forest (1.5-approximation)"),
        ("split-dp", "exact optimum on a split graph"),
    ]:
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("instance", nargs="?", default="-")
        cmd.add_argument("--json", action="store_true")
        cmd.set_defaults(handler=_cmd_strategy, strategy=name)

    orc = sub.add_parser("oracle", help="exact optimum by exhaustive search")
    orc.add_argument("instance", nargs="?", default="-")
    orc.add_argument("--state-budget", type=int, default=1_000_000)
    orc.add_argument("--node-limit", type=int, default=30)
    orc.add_argument("--json", action="store_true")
    orc.set_defaults(handler=_cmd_oracle)

    red = sub.add_parser("reduce", help="build the pricing instance for a CNF formula")
    red.add_argument("cnf", nargs="?", default="-")
    red.add_argument("--out", default="-")
    red.add_argument("--meta", default=None, help="also write sidecar metadata JSON here")
    red.add_argument("--json", action="store_true",
                     help="write one JSON object holding instance and metadata")
    red.set_defaults(handler=_cmd_reduce)

    ver = sub.add_parser("verify-gadgets", help="replay gadget sale patterns for a CNF formula")
    ver.add_argument("cnf", nargs="?", default="-")
    ver.add_argument("--json", action="store_true")
    ver.set_defaults(handler=_cmd_verify_gadgets)

    exp = sub.add_parser("experiment", help="seeded batch runs with CSV output")
    exp.add_argument("--family", required=True, choices=list(EXPERIMENT_FAMILIES))
    exp.add_argument("--trials", type=int, default=20)
    exp.add_argument("--master-seed", type=int, default=0)
    exp.add_argument("--jobs", type=int, default=None,
                     help="parallel workers (default: NETPRICE_JOBS or 1)")
    exp.add_argument("--n", type=int)
    exp.add_argument("--eta", type=float)
    exp.add_argument("--delta", type=float)
    exp.add_argument("--beta", type=int)
    exp.add_argument("--trees", type=int)
    exp.add_argument("--oracle-limit", type=int)
    exp.add_argument("--n-min", type=int)
    exp.add_argument("--n-max", type=int)
    exp.add_argument("--out", default="-")
    exp.set_defaults(handler=_cmd_experiment)

    return parser


def run_cli(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except (ValueError, OSError, json.JSONDecodeError, CnfError, OracleBudgetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
