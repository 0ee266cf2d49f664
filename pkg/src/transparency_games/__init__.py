"""Zero-sum transparency-vs-security games over transferable-attack payoff tables."""

from .equilibria import (
    FictitiousPlayTrace,
    StackelbergSolution,
    enumerate_equilibria,
    fictitious_play,
    solve_stackelberg_pure,
    transparency_cost,
)
from .game import (
    EquilibriumSolution,
    InvalidGameError,
    MixedStrategy,
    ZeroSumGame,
    best_response_rows,
    expected_payoff,
    prune_strictly_dominated_rows,
)
from .lp import MinimaxResult, solve_2x2_closed_form, solve_minimax
from .scenario import (
    PayoffRecord,
    ScenarioTable,
    baseline_degradation,
    build_attack_game,
    build_attack_surrogate_game,
    build_surrogate_game,
    load_bundled,
    load_table,
    parse_table,
    serialize_table,
)

__all__ = [
    "EquilibriumSolution",
    "FictitiousPlayTrace",
    "InvalidGameError",
    "MinimaxResult",
    "MixedStrategy",
    "PayoffRecord",
    "ScenarioTable",
    "StackelbergSolution",
    "ZeroSumGame",
    "baseline_degradation",
    "best_response_rows",
    "build_attack_game",
    "build_attack_surrogate_game",
    "build_surrogate_game",
    "enumerate_equilibria",
    "expected_payoff",
    "fictitious_play",
    "load_bundled",
    "load_table",
    "parse_table",
    "prune_strictly_dominated_rows",
    "serialize_table",
    "solve_2x2_closed_form",
    "solve_minimax",
    "solve_stackelberg_pure",
    "transparency_cost",
]
