"""Command-line entry point: ``talmopso --config cfg.json --out results/``."""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys

from .experiment import ExperimentError, export, load_config, run_experiment
from .network import ConfigError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _speed_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO,HI, got {text!r}") from None
    return lo, hi


def _seed_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="talmopso", description="Plan overlapping tracking area lists with MOPSO.")
    p.add_argument("--config", help="JSON config with optional network/mopso/experiment sections")
    p.add_argument("--seed", type=int, help="first seed; trials use seed, seed+1, ...")
    p.add_argument("--seeds", type=_seed_list, help="explicit comma-separated seeds")
    p.add_argument("--trials", type=int, help="trials per speed range")
    p.add_argument("--speed-range", type=_speed_range, action="append", dest="speed_ranges",
                   metavar="LO,HI", help="speed range in m/s (repeatable)")
    p.add_argument("--population", type=int)
    p.add_argument("--iterations", type=int)
    p.add_argument("--out", help="output directory")
    p.add_argument("--emit-plot-data", action="store_true", help="also write whitespace-separated plot series")
    p.add_argument("--oracle", action="store_true", help="also write exhaustive fronts (tiny instances only)")
    p.add_argument("--paper-scale", action="store_true", help="population 10000, 400 iterations")
    p.add_argument("--record-wall-time", action="store_true",
                   help="fill the wall_ms CSV column (makes exports non-reproducible)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def resolve(args):
    network, params, plan = load_config(args.config, paper_scale=args.paper_scale)

    mopso = {}
    if args.population is not None:
        mopso["population"] = args.population
    if args.iterations is not None:
        mopso["iterations"] = args.iterations
    if mopso:
        params = dataclasses.replace(params, **mopso)

    exp = {}
    seeds = plan.seeds
    if args.seeds is not None:
        seeds = args.seeds
    elif args.seed is not None:
        n = args.trials if args.trials is not None else plan.trials_per_range
        seeds = tuple(args.seed + i for i in range(n))
    elif args.trials is not None and args.trials != len(seeds):
        base = seeds[0] if seeds else 0
        seeds = tuple(base + i for i in range(args.trials))
    if seeds != plan.seeds:
        exp["seeds"] = seeds
    exp["trials_per_range"] = args.trials if args.trials is not None else len(seeds)
    if args.speed_ranges:
        exp["speed_ranges"] = tuple(args.speed_ranges)
    if args.out:
        exp["output_dir"] = args.out
    if args.emit_plot_data:
        exp["emit_plot_data"] = True
    if args.oracle:
        exp["oracle"] = True
    if args.record_wall_time:
        exp["record_wall_time"] = True
    try:
        plan = dataclasses.replace(plan, **exp)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    return network, params, plan


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        network, params, plan = resolve(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        result = run_experiment(network, params, plan, out_dir=plan.output_dir)
        export(result, plan.output_dir, plan)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ExperimentError as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    for a in result.aggregates:
        print(f"[{a.speed_range[0]:g},{a.speed_range[1]:g}] m/s  "
              f"J1 {a.j1.mean:.6g} +- {a.j1.std:.3g} ({a.j1.rsd:.2f}%)  "
              f"J2 {a.j2.mean:.6g} +- {a.j2.std:.3g} ({a.j2.rsd:.2f}%)  "
              f"power {a.power.mean:.4g} mW")
    print(f"results written to {plan.output_dir}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
