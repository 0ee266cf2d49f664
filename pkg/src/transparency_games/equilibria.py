"""Equilibrium enumeration, pure-commitment Stackelberg play, and fictitious play."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

import numpy as np

from .game import (
    TIE_TOL,
    EquilibriumSolution,
    InvalidGameError,
    MixedStrategy,
    ZeroSumGame,
    best_response_rows,
)
from .lp import solve_minimax

MAX_ENUM_DIM = 20
DEVIATION_TOL = 1e-7


@dataclass(frozen=True)
class StackelbergSolution:
    committed_col: int
    follower_rows: frozenset[int]
    value: float
    leader_ties: frozenset[int]


@dataclass(frozen=True)
class FictitiousPlayTrace:
    iterations: int
    empirical_attacker: MixedStrategy
    empirical_defender: MixedStrategy
    empirical_value: float
    lower_bound: float
    upper_bound: float
    value_history: tuple[tuple[int, float], ...]


def _maximin_vertices(A: np.ndarray) -> tuple[float, list[np.ndarray]]:
    """Extreme optimal strategies of the row player who maximizes ``A``.

    Every vertex of {(x, v): x in simplex, x^T A >= v} with support I is pinned
    by |I| tight columns J plus the simplex constraint, so square supports
    suffice. Singular support pairs are skipped; they only contribute
    non-extreme points.
    """
    m, n = A.shape
    scale = max(1.0, float(np.abs(A).max()))
    tol = 1e-9 * scale
    found: list[tuple[float, np.ndarray]] = []
    for k in range(1, min(m, n) + 1):
        pairs = list(itertools.product(itertools.combinations(range(m), k), itertools.combinations(range(n), k)))
        systems = np.zeros((len(pairs), k + 1, k + 1))
        for p, (rows, cols) in enumerate(pairs):
            systems[p, :k, :k] = A[np.ix_(rows, cols)].T
            systems[p, :k, k] = -1.0
            systems[p, k, :k] = 1.0
        sv = np.linalg.svd(systems, compute_uv=False)
        regular = sv[:, -1] > 1e-12 * sv[:, 0]
        if not regular.any():
            continue
        rhs = np.zeros((int(regular.sum()), k + 1))
        rhs[:, k] = 1.0
        sols = np.linalg.solve(systems[regular], rhs[..., None])[..., 0]
        for (rows, _), sol in zip(itertools.compress(pairs, regular), sols):
            if np.any(sol[:k] < -1e-9):
                continue
            x = np.zeros(m)
            x[list(rows)] = np.clip(sol[:k], 0.0, None)
            x /= x.sum()
            guarantee = float((x @ A).min())
            if guarantee >= sol[k] - tol:
                found.append((guarantee, x))
    value = max(v for v, _ in found)
    vertices: list[np.ndarray] = []
    for v, x in found:
        if v >= value - tol and not any(np.allclose(x, y, atol=1e-9) for y in vertices):
            vertices.append(x)
    return value, vertices


def enumerate_equilibria(game: ZeroSumGame) -> list[EquilibriumSolution]:
    """All extreme Nash equilibria of the game.

    In a zero-sum game the equilibrium set is the product of the two players'
    optimal strategy sets, so each player's extreme optimal strategies are
    enumerated by support and the results are paired.
    """
    m, n = game.shape
    if m > MAX_ENUM_DIM or n > MAX_ENUM_DIM:
        raise InvalidGameError(f"enumeration supports at most {MAX_ENUM_DIM}x{MAX_ENUM_DIM}, got {m}x{n}")
    A = game.payoff
    _, row_vertices = _maximin_vertices(A)
    _, col_vertices = _maximin_vertices(-A.T)
    solutions = []
    for x, y in itertools.product(row_vertices, col_vertices):
        sol = EquilibriumSolution.from_strategies(
            game, MixedStrategy.from_weights(x), MixedStrategy.from_weights(y), "support-enumeration"
        )
        if is_equilibrium(game, sol):
            solutions.append(sol)
    return solutions


def is_equilibrium(game: ZeroSumGame, sol: EquilibriumSolution, tol: float = DEVIATION_TOL) -> bool:
    """No pure deviation improves either player's payoff by more than ``tol``."""
    A = game.payoff
    attacker_gain = (A @ sol.defender.probs).max() - sol.value
    defender_gain = sol.value - (sol.attacker.probs @ A).min()
    return bool(attacker_gain <= tol and defender_gain <= tol)


def solve_stackelberg_pure(game: ZeroSumGame) -> StackelbergSolution:
    """Defender commits to one column; the attacker best-responds."""
    column_max = game.payoff.max(axis=0)
    best = column_max.min()
    ties = frozenset(int(j) for j in np.flatnonzero(column_max <= best + TIE_TOL))
    committed = min(ties)
    followers = best_response_rows(game, MixedStrategy.pure(game.shape[1], committed))
    return StackelbergSolution(committed, followers, float(column_max[committed]), ties)


def transparency_cost(game: ZeroSumGame) -> float:
    """Attacker payoff gained when the defender's choice is public (Stackelberg minus Nash)."""
    return solve_stackelberg_pure(game).value - solve_minimax(game).value


def _checkpoints(iterations: int, count: int = 60) -> set[int]:
    points = np.unique(np.geomspace(1, iterations, num=min(count, iterations)).round().astype(int))
    return set(int(p) for p in points) | {iterations}


def fictitious_play(game: ZeroSumGame, iterations: int, seed: int = 0) -> FictitiousPlayTrace:
    """Simultaneous fictitious play starting from (row 0, column 0).

    Each round both players best-respond to the opponent's empirical history;
    ties are broken uniformly at random from ``seed``. The empirical value is
    the payoff of the two empirical mixtures against each other.
    """
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    A = game.payoff
    m, n = A.shape
    rows = A.tolist()
    cols = A.T.tolist()
    rng = random.Random(seed)
    scale = max(1.0, float(np.abs(A).max()))

    row_counts = [0] * m
    col_counts = [0] * n
    row_counts[0] = col_counts[0] = 1
    row_cum = list(cols[0])  # payoff of each row against the defender's history
    col_cum = list(rows[0])  # payoff conceded by each column against the attacker's history
    checkpoints = _checkpoints(iterations)
    history = []

    def mixture_value(t):
        x = np.array(row_counts) / t
        y = np.array(col_counts) / t
        return float(x @ A @ y)

    if 1 in checkpoints:
        history.append((1, mixture_value(1)))
    for t in range(2, iterations + 1):
        tol = TIE_TOL * scale * t
        best = max(row_cum)
        tied = [i for i, v in enumerate(row_cum) if v >= best - tol]
        i = tied[0] if len(tied) == 1 else tied[rng.randrange(len(tied))]
        best = min(col_cum)
        tied = [j for j, v in enumerate(col_cum) if v <= best + tol]
        j = tied[0] if len(tied) == 1 else tied[rng.randrange(len(tied))]

        row_counts[i] += 1
        col_counts[j] += 1
        column = cols[j]
        row_cum = [a + b for a, b in zip(row_cum, column)]
        row = rows[i]
        col_cum = [a + b for a, b in zip(col_cum, row)]
        if t in checkpoints:
            history.append((t, mixture_value(t)))

    x = MixedStrategy(np.array(row_counts) / iterations)
    y = MixedStrategy(np.array(col_counts) / iterations)
    return FictitiousPlayTrace(
        iterations=iterations,
        empirical_attacker=x,
        empirical_defender=y,
        empirical_value=float(x.probs @ A @ y.probs),
        lower_bound=min(col_cum) / iterations,
        upper_bound=max(row_cum) / iterations,
        value_history=tuple(history),
    )


def fictitious_play_gap(game: ZeroSumGame, trace: FictitiousPlayTrace) -> float:
    return abs(trace.empirical_value - solve_minimax(game).value)
