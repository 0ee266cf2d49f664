"""Dense minimax LP for zero-sum matrix games.

The payoff matrix is shifted so every entry is at least 1, after which the
defender's problem

    maximize  sum(w)   subject to  A w <= 1,  w >= 0

is already in standard form with the slack basis feasible, so no phase one
is needed. At the optimum ``y = w / sum(w)`` is the defender's strategy, the
slack duals give the attacker's strategy, and ``1 / sum(w)`` is the shifted
value. Pivoting follows Bland's rule, which keeps the solver deterministic
and cycle-free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .game import EquilibriumSolution, InvalidGameError, MixedStrategy, ZeroSumGame

# Pivoting works on the normalized tableau, where a reduced-cost error e
# becomes roughly value**2 * e on the percent scale.
PIVOT_TOL = 1e-12
MAX_PIVOTS = 10_000

OPTIMAL = "optimal"
DEGENERATE = "numerically-degenerate"


@dataclass(frozen=True)
class MinimaxResult:
    value: float
    row_strategy: MixedStrategy
    col_strategy: MixedStrategy
    iterations: int
    status: str
    method: str = "lp-simplex"

    def floor(self, game: ZeroSumGame) -> float:
        """Worst case for the attacker's strategy over all defender columns."""
        return float((self.row_strategy.probs @ game.payoff).min())

    def ceiling(self, game: ZeroSumGame) -> float:
        """Best attacker reply to the defender's strategy."""
        return float((game.payoff @ self.col_strategy.probs).max())

    def to_equilibrium(self, game: ZeroSumGame) -> EquilibriumSolution:
        return EquilibriumSolution.from_strategies(
            game, self.row_strategy, self.col_strategy, self.method
        )


def _simplex_max(tableau: np.ndarray, basis: list[int], max_pivots: int) -> tuple[int, bool]:
    """Maximize in place. The last row holds reduced costs, the last column the rhs.

    Returns (pivot count, converged).
    """
    n_rows = tableau.shape[0] - 1
    n_vars = tableau.shape[1] - 1
    cost = tableau[-1]
    for pivots in range(max_pivots + 1):
        entering = next((j for j in range(n_vars) if cost[j] > PIVOT_TOL), None)
        if entering is None:
            return pivots, True
        if pivots == max_pivots:
            break
        column = tableau[:n_rows, entering]
        rhs = tableau[:n_rows, -1]
        candidates = np.flatnonzero(column > PIVOT_TOL)
        # Bounded by construction: every column of the shifted matrix is positive.
        ratios = rhs[candidates] / column[candidates]
        best = ratios.min()
        tied = candidates[ratios <= best + PIVOT_TOL * max(1.0, abs(best))]
        leaving = min(tied, key=lambda r: basis[r])
        tableau[leaving] /= tableau[leaving, entering]
        for r in range(n_rows + 1):
            if r != leaving and tableau[r, entering] != 0.0:
                tableau[r] -= tableau[r, entering] * tableau[leaving]
        basis[leaving] = entering
    return max_pivots, False


def solve_minimax(game: ZeroSumGame, max_pivots: int = MAX_PIVOTS) -> MinimaxResult:
    """Game value and one optimal strategy pair.

    The value is the payoff of the returned strategy pair. If the pivot cap
    is hit, the status is ``numerically-degenerate`` and the reported value
    is the defender's ceiling for the current (feasible) strategy, which is
    an upper bound on the true value.
    """
    A = game.payoff
    m, n = A.shape
    shift = 1.0 - A.min()
    shifted = A + shift

    tableau = np.zeros((m + 1, n + m + 1))
    tableau[:m, :n] = shifted
    tableau[:m, n : n + m] = np.eye(m)
    tableau[:m, -1] = 1.0
    tableau[-1, :n] = 1.0
    basis = list(range(n, n + m))

    pivots, converged = _simplex_max(tableau, basis, max_pivots)

    w = np.zeros(n + m)
    w[basis] = tableau[:m, -1]
    w = np.clip(w[:n], 0.0, None)
    duals = np.clip(-tableau[-1, n : n + m], 0.0, None)

    if w.sum() <= 0.0:
        # Only reachable when the cap stops us before the first pivot.
        col = MixedStrategy.uniform(n)
    else:
        col = MixedStrategy.from_weights(w)
    if duals.sum() <= 0.0:
        row = MixedStrategy.uniform(m)
    else:
        row = MixedStrategy.from_weights(duals)

    if converged:
        # Payoff of the returned pair; sits between its floor and ceiling.
        value = float(row.probs @ A @ col.probs)
        status = OPTIMAL
    else:
        value = float((A @ col.probs).max())
        status = DEGENERATE
    return MinimaxResult(float(value), row, col, pivots, status)


def solve_2x2_closed_form(game: ZeroSumGame) -> MinimaxResult:
    """Closed-form solution of a 2x2 zero-sum game.

    A pure saddle point is returned when maximin equals minimax (lowest
    indices on ties); otherwise the interior mixed solution. A constant
    matrix returns uniform strategies.
    """
    if game.shape != (2, 2):
        raise InvalidGameError(f"closed form needs a 2x2 game, got {game.shape}")
    A = game.payoff
    (a11, a12), (a21, a22) = A
    method = "closed-form-2x2"

    if np.all(A == A[0, 0]):
        u = MixedStrategy.uniform(2)
        return MinimaxResult(float(a11), u, u, 0, OPTIMAL, method)

    row_floor = A.min(axis=1)
    col_ceiling = A.max(axis=0)
    if row_floor.max() == col_ceiling.min():
        i = int(np.argmax(row_floor))
        j = int(np.argmin(col_ceiling))
        return MinimaxResult(
            float(A[i, j]), MixedStrategy.pure(2, i), MixedStrategy.pure(2, j), 0, OPTIMAL, method
        )

    d = a11 + a22 - a12 - a21
    x1 = (a22 - a21) / d
    y1 = (a22 - a12) / d
    value = (a11 * a22 - a12 * a21) / d
    return MinimaxResult(
        float(value),
        MixedStrategy.from_weights([x1, 1.0 - x1]),
        MixedStrategy.from_weights([y1, 1.0 - y1]),
        0,
        OPTIMAL,
        method,
    )
