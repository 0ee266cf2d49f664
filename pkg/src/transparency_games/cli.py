"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 data or domain error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import analysis
from .equilibria import fictitious_play
from .lp import solve_minimax
from .scenario import (
    DEFAULT_SURROGATE,
    DEFENDED_SURROGATES,
    BuildError,
    ScenarioTable,
    TableError,
    build_attack_game,
    build_attack_surrogate_game,
    build_surrogate_game,
    bundled_data_dir,
    load_table,
)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_IO = 0, 1, 2, 3
GAME_KINDS = ("surrogate", "attack-surrogate", "attack")
REPORT_KINDS = ("transparency", "mixing", "underestimation")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    data_path: Path
    dataset: str | None
    output_format: str = "text"
    defended_surrogate: str = DEFAULT_SURROGATE
    seed: int = 0
    iterations: int = 100_000
    all_datasets: bool = False

    def __post_init__(self):
        if self.output_format not in analysis.FORMATS:
            raise UsageError(f"unknown format {self.output_format!r}")
        if self.iterations < 1:
            raise UsageError("iterations must be >= 1")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--data",
        type=Path,
        default=None,
        help="table file or directory of tables (default: bundled CIFAR10 and ImageNet data)",
    )
    common.add_argument("--dataset", default=None)
    common.add_argument("--format", dest="output_format", choices=analysis.FORMATS, default="text")
    common.add_argument(
        "--surrogate",
        dest="defended_surrogate",
        choices=DEFENDED_SURROGATES,
        default=DEFAULT_SURROGATE,
        help="defended surrogate class used for the defended row",
    )

    parser = _Parser(prog="transparency-games", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("validate", parents=[common], help="check a payoff table")

    for name, help_text in (("solve", "solve one game"), ("simulate", "run fictitious play on one game")):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--game", choices=GAME_KINDS, default="surrogate")
        p.add_argument("--attack", default=None)
        if name == "simulate":
            p.add_argument("--iterations", type=_positive_int, default=100_000)
            p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("report", parents=[common], help="batch analyses over every attack")
    p.add_argument("kind", choices=REPORT_KINDS)
    p.add_argument("--all-datasets", action="store_true", help="every dataset in the table (default without --dataset)")
    return parser


def _config(args) -> CliConfig:
    return CliConfig(
        data_path=args.data if args.data is not None else bundled_data_dir(),
        dataset=args.dataset,
        output_format=args.output_format,
        defended_surrogate=args.defended_surrogate,
        seed=getattr(args, "seed", 0),
        iterations=getattr(args, "iterations", 100_000),
        all_datasets=getattr(args, "all_datasets", False),
    )


def _require_dataset(table: ScenarioTable, config: CliConfig) -> str:
    if config.dataset is None:
        raise UsageError(f"--dataset is required; available: {', '.join(table.datasets)}")
    table.attacks(config.dataset)  # raises with candidates if unknown
    return config.dataset


def _build_game(table, config, game_kind, attack):
    dataset = _require_dataset(table, config)
    if game_kind == "surrogate":
        if attack is None:
            raise UsageError(f"--game surrogate needs --attack; available: {', '.join(table.attacks(dataset))}")
        return (
            build_surrogate_game(table, dataset, attack, config.defended_surrogate),
            f"Surrogate game, {attack} on {dataset}",
        )
    if game_kind == "attack-surrogate":
        return build_attack_surrogate_game(table, dataset, config.defended_surrogate), f"Attack-and-Surrogate game, {dataset}"
    return build_attack_game(table, dataset), f"Attack game, {dataset}"


def cmd_validate(config: CliConfig, out) -> int:
    try:
        table = load_table(config.data_path)
    except TableError as exc:
        print(f"invalid: {len(exc.issues)} problem(s) in {config.data_path}", file=out)
        for issue in exc.issues:
            print(f"  {issue}", file=out)
        return EXIT_DATA
    print(f"ok: {config.data_path}", file=out)
    for ds in table.datasets:
        print(f"  {ds}: {len(table.attacks(ds))} attacks", file=out)
    return EXIT_OK


def cmd_solve(config: CliConfig, game_kind: str, attack: str | None, out) -> int:
    table = load_table(config.data_path)
    game, name = _build_game(table, config, game_kind, attack)
    out.write(analysis.summarize_game(game, name).render(config.output_format))
    return EXIT_OK


def cmd_report(config: CliConfig, report_kind: str, out) -> int:
    table = load_table(config.data_path)
    if config.dataset is not None and not config.all_datasets:
        datasets = [_require_dataset(table, config)]
    else:
        datasets = list(table.datasets)
    reports = []
    for ds in datasets:
        if report_kind == "transparency":
            rep = analysis.transparency_report(table, ds, config.defended_surrogate)
        elif report_kind == "mixing":
            rep = analysis.mixing_report(table, ds, defended_surrogate=config.defended_surrogate)
        else:
            rep = analysis.underestimation_report(table, ds, config.defended_surrogate)
        reports.append(rep.as_report())
    if config.output_format == "tree":
        doc = reports[0].to_tree() if len(reports) == 1 else [r.to_tree() for r in reports]
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write("\n".join(r.render(config.output_format) for r in reports))
    return EXIT_OK


def cmd_simulate(config: CliConfig, game_kind: str, attack: str | None, out) -> int:
    table = load_table(config.data_path)
    game, name = _build_game(table, config, game_kind, attack)
    trace = fictitious_play(game, config.iterations, config.seed)
    value = solve_minimax(game).value
    gap = abs(trace.empirical_value - value)
    if config.output_format == "tree":
        doc = {
            "game": name,
            "iterations": trace.iterations,
            "seed": config.seed,
            "empirical_value": trace.empirical_value,
            "lp_value": value,
            "gap": gap,
            "bounds": [trace.lower_bound, trace.upper_bound],
            "attacker": dict(zip(game.row_labels, trace.empirical_attacker.probs.tolist())),
            "defender": dict(zip(game.col_labels, trace.empirical_defender.probs.tolist())),
            "history": [list(h) for h in trace.value_history],
        }
        out.write(json.dumps(doc, indent=2) + "\n")
        return EXIT_OK
    if config.output_format == "csv":
        out.write("iteration,empirical_value,gap\n")
        for t, v in trace.value_history:
            out.write(f"{t},{v:.6f},{abs(v - value):.6f}\n")
        return EXIT_OK
    print(f"{name}: fictitious play, {trace.iterations} iterations, seed {config.seed}", file=out)
    print(f"empirical value: {trace.empirical_value:.4f}", file=out)
    print(f"LP value:        {value:.4f}", file=out)
    print(f"gap:             {gap:.4f}", file=out)
    print(f"bounds:          [{trace.lower_bound:.4f}, {trace.upper_bound:.4f}]", file=out)
    print("history (iteration, empirical value, gap):", file=out)
    for t, v in trace.value_history:
        print(f"  {t:>9d}  {v:9.4f}  {abs(v - value):.4f}", file=out)
    return EXIT_OK


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = _config(args)
        if args.command == "validate":
            return cmd_validate(config, out)
        if args.command == "solve":
            return cmd_solve(config, args.game, args.attack, out)
        if args.command == "simulate":
            return cmd_simulate(config, args.game, args.attack, out)
        return cmd_report(config, args.kind, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return EXIT_USAGE
    except (TableError, BuildError, ArithmeticError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_DATA
    except OSError as exc:
        print(f"I/O error: {exc}", file=err)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
