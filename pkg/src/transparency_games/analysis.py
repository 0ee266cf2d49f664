"""Batch analyses over a payoff table: transparency cost, mixing, underestimation.

Every report renders to aligned text, CSV, or JSON ("tree") with the same
fields. Internal math is unrounded; text and CSV show percentages rounded
half-up to two decimals.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Callable, Iterable

from .equilibria import (
    StackelbergSolution,
    enumerate_equilibria,
    solve_stackelberg_pure,
)
from .game import EquilibriumSolution, ZeroSumGame
from .lp import solve_minimax
from .scenario import (
    DEFAULT_SURROGATE,
    ScenarioTable,
    baseline_degradation,
    build_attack_game,
    build_attack_surrogate_game,
    build_surrogate_game,
)

COST_CLAMP = 1e-7
FORMATS = ("text", "csv", "tree")

TRANSPARENCY_FORMULA = "cost = Stackelberg value (pure defender commitment) - Nash value"
MIXING_FORMULA = "P(undefended) = equilibrium probability of row/column 'undefended' in the Surrogate game"
UNDERESTIMATION_FORMULA = (
    "difference = V(A&S) - V(Attack); factor = (V(A&S) - b_D) / (V(Attack) - b_D), "
    "b_D = no-attack degradation of defended targets"
)


def round_display(value: float, digits: int = 2) -> Decimal:
    """Half-up rounding as used in printed tables."""
    return Decimal(repr(float(value))).quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_UP) + 0


def fmt(value: float, digits: int = 2) -> str:
    return f"{round_display(value, digits):.{digits}f}"


@dataclass(frozen=True)
class Report:
    """Common rendering: a title, metadata lines, and a table of rows."""

    title: str
    meta: dict
    columns: tuple[str, ...]
    rows: tuple[dict, ...]
    summary: dict = field(default_factory=dict)

    def _cell(self, key, value) -> str:
        if isinstance(value, float):
            return fmt(value)
        return str(value)

    def to_text(self) -> str:
        header = list(self.columns)
        body = [[self._cell(c, r[c]) for c in self.columns] for r in self.rows]
        widths = [max(len(x) for x in col) for col in zip(header, *body)] if body else [len(h) for h in header]
        lines = [self.title]
        lines += [f"  {k}: {v}" for k, v in self.meta.items()]
        lines.append("")
        lines.append("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
        for row in body:
            lines.append("  ".join(c.rjust(w) if i else c.ljust(w) for i, (c, w) in enumerate(zip(row, widths))))
        if self.summary:
            lines.append("")
            lines += [f"{k}: {self._cell(k, v)}" for k, v in self.summary.items()]
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write(f"# {self.title}\n")
        for k, v in self.meta.items():
            out.write(f"# {k}: {v}\n")
        for k, v in self.summary.items():
            out.write(f"# {k}: {self._cell(k, v)}\n")
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(self.columns)
        for r in self.rows:
            writer.writerow([self._cell(c, r[c]) for c in self.columns])
        return out.getvalue()

    def to_tree(self) -> dict:
        return {
            "title": self.title,
            "meta": dict(self.meta),
            "rows": [dict(r) for r in self.rows],
            "summary": dict(self.summary),
        }

    def render(self, fmt_name: str = "text") -> str:
        if fmt_name == "text":
            return self.to_text()
        if fmt_name == "csv":
            return self.to_csv()
        if fmt_name == "tree":
            return json.dumps(self.to_tree(), indent=2) + "\n"
        raise ValueError(f"unknown format {fmt_name!r}; expected one of {', '.join(FORMATS)}")


# -- transparency cost ------------------------------------------------------


@dataclass(frozen=True)
class TransparencyEntry:
    attack: str
    nash_value: float
    stackelberg_value: float
    cost: float


@dataclass(frozen=True)
class TransparencyReport:
    dataset: str
    defended_surrogate: str
    entries: tuple[TransparencyEntry, ...]
    worse_off_count: int
    mean_nonzero_cost: float

    def cost_for(self, attack: str) -> float:
        return next(e.cost for e in self.entries if e.attack == attack)

    def as_report(self) -> Report:
        return Report(
            title=f"Transparency cost, {self.dataset}",
            meta={"defended surrogate": self.defended_surrogate, "formula": TRANSPARENCY_FORMULA},
            columns=("attack", "nash", "stackelberg", "cost"),
            rows=tuple(
                {"attack": e.attack, "nash": e.nash_value, "stackelberg": e.stackelberg_value, "cost": e.cost}
                for e in self.entries
            ),
            summary={
                "worse off": f"{self.worse_off_count} / {len(self.entries)}",
                "mean change (nonzero)": self.mean_nonzero_cost,
            },
        )


def transparency_report(
    table: ScenarioTable, dataset: str, defended_surrogate: str = DEFAULT_SURROGATE
) -> TransparencyReport:
    """Stackelberg minus Nash attacker payoff for every attack's Surrogate game."""
    entries = []
    for attack in table.attacks(dataset):
        game = build_surrogate_game(table, dataset, attack, defended_surrogate)
        nash = solve_minimax(game).value
        stackelberg = solve_stackelberg_pure(game).value
        cost = stackelberg - nash
        if cost < -COST_CLAMP:
            raise ArithmeticError(f"{dataset}/{attack}: Stackelberg value below Nash value by {-cost}")
        entries.append(TransparencyEntry(attack, nash, stackelberg, max(cost, 0.0)))
    counted = [e.cost for e in entries if round_display(e.cost) > 0]
    mean = sum(counted) / len(counted) if counted else 0.0
    return TransparencyReport(dataset, defended_surrogate, tuple(entries), len(counted), mean)


# -- mixing probabilities ---------------------------------------------------


@dataclass(frozen=True)
class MixingEntry:
    attack: str
    attacker_p_undefended: float
    defender_p_undefended: float
    kind: str


@dataclass(frozen=True)
class MixingReport:
    dataset: str
    defended_surrogate: str
    entries: tuple[MixingEntry, ...]

    def entry(self, attack: str) -> MixingEntry:
        return next(e for e in self.entries if e.attack == attack)

    def as_report(self) -> Report:
        return Report(
            title=f"Probability (%) of playing undefended at the Surrogate-game equilibrium, {self.dataset}",
            meta={"defended surrogate": self.defended_surrogate, "formula": MIXING_FORMULA},
            columns=("attack", "surrogate", "target", "kind"),
            rows=tuple(
                {
                    "attack": e.attack,
                    "surrogate": e.attacker_p_undefended,
                    "target": e.defender_p_undefended,
                    "kind": e.kind,
                }
                for e in self.entries
            ),
        )


def has_mixed_equilibrium(game: ZeroSumGame) -> bool:
    return any(sol.kind == "mixed" for sol in enumerate_equilibria(game))


def mixed_attacks(table: ScenarioTable, defended_surrogate: str = DEFAULT_SURROGATE) -> tuple[str, ...]:
    """Attacks whose Surrogate game has a mixed equilibrium on at least one dataset."""
    found = set()
    for dataset in table.datasets:
        for attack in table.attacks(dataset):
            if attack not in found and has_mixed_equilibrium(
                build_surrogate_game(table, dataset, attack, defended_surrogate)
            ):
                found.add(attack)
    return tuple(sorted(found))


def mixing_report(
    table: ScenarioTable,
    dataset: str,
    include: Iterable[str] | Callable[[str], bool] | None = None,
    defended_surrogate: str = DEFAULT_SURROGATE,
) -> MixingReport:
    """Equilibrium probability of the undefended action for both players, per attack.

    ``include`` is a collection of attack names or a predicate; by default it
    keeps attacks that mix on at least one dataset in the table.
    """
    if include is None:
        keep = set(mixed_attacks(table, defended_surrogate))
        accept = keep.__contains__
    elif callable(include):
        accept = include
    else:
        accept = set(include).__contains__
    entries = []
    for attack in table.attacks(dataset):
        if not accept(attack):
            continue
        game = build_surrogate_game(table, dataset, attack, defended_surrogate)
        sol = solve_minimax(game).to_equilibrium(game)
        kind = "mixed" if has_mixed_equilibrium(game) else "pure"
        entries.append(
            MixingEntry(attack, 100.0 * float(sol.attacker.probs[0]), 100.0 * float(sol.defender.probs[0]), kind)
        )
    return MixingReport(dataset, defended_surrogate, tuple(entries))


# -- underestimation --------------------------------------------------------


@dataclass(frozen=True)
class UnderestimationReport:
    dataset: str
    v_attack_surrogate: float
    v_attack_only: float
    difference: float
    factor: float
    baseline_defended: float

    def as_report(self) -> Report:
        return Report(
            title=f"Underestimation of transferable attacks, {self.dataset}",
            meta={"formula": UNDERESTIMATION_FORMULA},
            columns=("dataset", "v_attack_surrogate", "v_attack_only", "difference", "factor", "baseline_defended"),
            rows=(
                {
                    "dataset": self.dataset,
                    "v_attack_surrogate": self.v_attack_surrogate,
                    "v_attack_only": self.v_attack_only,
                    "difference": self.difference,
                    "factor": self.factor,
                    "baseline_defended": self.baseline_defended,
                },
            ),
        )


def underestimation_report(
    table: ScenarioTable, dataset: str, defended_surrogate: str = DEFAULT_SURROGATE
) -> UnderestimationReport:
    """Compare the A&S game with the undefended-surrogate-only Attack game."""
    full = solve_minimax(build_attack_surrogate_game(table, dataset, defended_surrogate)).value
    only = solve_minimax(build_attack_game(table, dataset)).value
    base = baseline_degradation(table, dataset, "defended")
    return UnderestimationReport(dataset, full, only, full - only, (full - base) / (only - base), base)


# -- whole-game summaries ---------------------------------------------------


@dataclass(frozen=True)
class GameSummary:
    name: str
    game: ZeroSumGame
    nash: EquilibriumSolution
    stackelberg: StackelbergSolution
    cost: float

    @property
    def attacker_support(self) -> dict[str, float]:
        return self.nash.attacker_support(self.game)

    @property
    def defender_support(self) -> dict[str, float]:
        return self.nash.defender_support(self.game)

    @property
    def committed_label(self) -> str:
        return self.game.col_labels[self.stackelberg.committed_col]

    def to_tree(self) -> dict:
        g = self.game
        return {
            "game": self.name,
            "rows": list(g.row_labels),
            "cols": list(g.col_labels),
            "payoff": g.payoff.tolist(),
            "nash": {
                "value": self.nash.value,
                "kind": self.nash.kind,
                "method": self.nash.method,
                "attacker": self.attacker_support,
                "defender": self.defender_support,
            },
            "stackelberg": {
                "commit": self.committed_label,
                "followers": [g.row_labels[i] for i in sorted(self.stackelberg.follower_rows)],
                "leader_ties": [g.col_labels[j] for j in sorted(self.stackelberg.leader_ties)],
                "value": self.stackelberg.value,
            },
            "transparency_cost": self.cost,
            "formula": TRANSPARENCY_FORMULA,
        }

    def to_text(self) -> str:
        g = self.game
        width = max(len(r) for r in g.row_labels)
        lines = [f"{self.name}", "", "normal form (attacker payoff, %):"]
        lines.append(" " * width + "  " + "  ".join(f"{c:>10}" for c in g.col_labels))
        for label, row in zip(g.row_labels, g.payoff):
            lines.append(f"{label:<{width}}  " + "  ".join(f"{fmt(v):>10}" for v in row))
        lines += ["", f"Nash ({self.nash.kind}, {self.nash.method}): value {fmt(self.nash.value)}"]
        lines += [f"  attacker {k}: {fmt(100 * p)}%" for k, p in self.attacker_support.items()]
        lines += [f"  defender {k}: {fmt(100 * p)}%" for k, p in self.defender_support.items()]
        followers = ", ".join(g.row_labels[i] for i in sorted(self.stackelberg.follower_rows))
        lines += [
            f"Stackelberg: defender commits to {self.committed_label}, attacker replies {followers}, "
            f"value {fmt(self.stackelberg.value)}",
            f"transparency cost: {fmt(self.cost)}",
        ]
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(("section", "label", "value"))
        writer.writerow(("nash", "value", fmt(self.nash.value)))
        writer.writerow(("nash", "kind", self.nash.kind))
        for k, p in self.attacker_support.items():
            writer.writerow(("attacker", k, fmt(100 * p)))
        for k, p in self.defender_support.items():
            writer.writerow(("defender", k, fmt(100 * p)))
        writer.writerow(("stackelberg", "commit", self.committed_label))
        writer.writerow(("stackelberg", "value", fmt(self.stackelberg.value)))
        writer.writerow(("transparency", "cost", fmt(self.cost)))
        return out.getvalue()

    def render(self, fmt_name: str = "text") -> str:
        if fmt_name == "text":
            return self.to_text()
        if fmt_name == "csv":
            return self.to_csv()
        if fmt_name == "tree":
            return json.dumps(self.to_tree(), indent=2) + "\n"
        raise ValueError(f"unknown format {fmt_name!r}")


def summarize_game(game: ZeroSumGame, name: str = "game") -> GameSummary:
    nash = solve_minimax(game).to_equilibrium(game)
    stackelberg = solve_stackelberg_pure(game)
    cost = stackelberg.value - nash.value
    if -COST_CLAMP < cost < 0.0:
        cost = 0.0
    return GameSummary(name, game, nash, stackelberg, cost)


def as_game_summary(
    table: ScenarioTable, dataset: str, defended_surrogate: str = DEFAULT_SURROGATE
) -> GameSummary:
    """Nash and Stackelberg solutions of the Attack-and-Surrogate game, with row names."""
    game = build_attack_surrogate_game(table, dataset, defended_surrogate)
    return summarize_game(game, f"Attack-and-Surrogate game, {dataset}")
