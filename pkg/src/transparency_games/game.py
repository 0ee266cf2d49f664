"""Zero-sum game representation and payoff algebra.

Payoffs are attacker utilities on the 0-100 percent scale (accuracy
degradation). Rows are attacker actions, columns are defender actions; the
defender's utility is the 100-complement and is never stored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

PROB_TOL = 1e-9
TIE_TOL = 1e-9


class InvalidGameError(ValueError):
    """Raised when a game, strategy, or pairing of the two is malformed."""


@dataclass(frozen=True, eq=False)
class ZeroSumGame:
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    payoff: np.ndarray = field(repr=False)

    def __post_init__(self):
        payoff = np.array(self.payoff, dtype=float)
        if payoff.ndim != 2 or payoff.shape[0] < 1 or payoff.shape[1] < 1:
            raise InvalidGameError(f"payoff must be a non-empty 2-D matrix, got shape {payoff.shape}")
        if not np.all(np.isfinite(payoff)):
            raise InvalidGameError("payoff entries must be finite")
        rows, cols = tuple(self.row_labels), tuple(self.col_labels)
        if len(rows) != payoff.shape[0] or len(cols) != payoff.shape[1]:
            raise InvalidGameError(
                f"{len(rows)} row / {len(cols)} column labels for a {payoff.shape} payoff matrix"
            )
        for axis, labels in (("row", rows), ("column", cols)):
            if len(set(labels)) != len(labels):
                raise InvalidGameError(f"duplicate {axis} labels: {labels}")
        payoff.setflags(write=False)
        object.__setattr__(self, "row_labels", rows)
        object.__setattr__(self, "col_labels", cols)
        object.__setattr__(self, "payoff", payoff)

    def __eq__(self, other):
        if not isinstance(other, ZeroSumGame):
            return NotImplemented
        return (
            self.row_labels == other.row_labels
            and self.col_labels == other.col_labels
            and np.array_equal(self.payoff, other.payoff)
        )

    def __hash__(self):
        return hash((self.row_labels, self.col_labels, self.payoff.tobytes()))

    @classmethod
    def from_matrix(cls, payoff, row_labels=None, col_labels=None) -> "ZeroSumGame":
        """Build a game with default ``r0, r1, ...`` / ``c0, c1, ...`` labels."""
        payoff = np.asarray(payoff, dtype=float)
        if payoff.ndim != 2:
            raise InvalidGameError(f"payoff must be 2-D, got shape {payoff.shape}")
        m, n = payoff.shape
        if row_labels is None:
            row_labels = [f"r{i}" for i in range(m)]
        if col_labels is None:
            col_labels = [f"c{j}" for j in range(n)]
        return cls(tuple(row_labels), tuple(col_labels), payoff)

    @property
    def shape(self) -> tuple[int, int]:
        return self.payoff.shape

    @property
    def defender_payoff(self) -> np.ndarray:
        return 100.0 - self.payoff

    def affine(self, scale: float, offset: float) -> "ZeroSumGame":
        """Return the game with payoffs ``scale * payoff + offset``."""
        return ZeroSumGame(self.row_labels, self.col_labels, scale * self.payoff + offset)

    def restrict_rows(self, rows: Sequence[int]) -> "ZeroSumGame":
        rows = list(rows)
        return ZeroSumGame(
            tuple(self.row_labels[i] for i in rows), self.col_labels, self.payoff[rows, :]
        )


@dataclass(frozen=True, eq=False)
class MixedStrategy:
    probs: np.ndarray

    def __post_init__(self):
        probs = np.array(self.probs, dtype=float).reshape(-1)
        if probs.size == 0:
            raise InvalidGameError("empty strategy")
        if not np.all(np.isfinite(probs)) or np.any(probs < 0):
            raise InvalidGameError(f"strategy has negative or non-finite entries: {probs}")
        if abs(probs.sum() - 1.0) > PROB_TOL:
            raise InvalidGameError(f"strategy sums to {probs.sum()!r}, not 1")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def pure(cls, size: int, index: int) -> "MixedStrategy":
        probs = np.zeros(size)
        probs[index] = 1.0
        return cls(probs)

    @classmethod
    def uniform(cls, size: int) -> "MixedStrategy":
        return cls(np.full(size, 1.0 / size))

    @classmethod
    def from_weights(cls, weights) -> "MixedStrategy":
        """Clip tiny negatives left by floating point and renormalize."""
        w = np.clip(np.asarray(weights, dtype=float), 0.0, None)
        return cls(w / w.sum())

    def __len__(self):
        return self.probs.size

    def __eq__(self, other):
        if not isinstance(other, MixedStrategy):
            return NotImplemented
        return np.array_equal(self.probs, other.probs)

    def __hash__(self):
        return hash(self.probs.tobytes())

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.probs > PROB_TOL))

    @property
    def is_pure(self) -> bool:
        return int(np.sum(np.abs(self.probs - 1.0) <= PROB_TOL)) == 1


@dataclass(frozen=True)
class EquilibriumSolution:
    attacker: MixedStrategy
    defender: MixedStrategy
    value: float
    kind: str
    method: str

    @classmethod
    def from_strategies(
        cls, game: ZeroSumGame, attacker: MixedStrategy, defender: MixedStrategy, method: str
    ) -> "EquilibriumSolution":
        kind = "pure" if attacker.is_pure and defender.is_pure else "mixed"
        return cls(attacker, defender, expected_payoff(game, attacker, defender), kind, method)

    def attacker_support(self, game: ZeroSumGame) -> dict[str, float]:
        return {game.row_labels[i]: float(self.attacker.probs[i]) for i in self.attacker.support}

    def defender_support(self, game: ZeroSumGame) -> dict[str, float]:
        return {game.col_labels[j]: float(self.defender.probs[j]) for j in self.defender.support}


def _check_axis(strategy: MixedStrategy, size: int, axis: str):
    if len(strategy) != size:
        raise InvalidGameError(f"{axis} strategy has {len(strategy)} entries, game has {size} {axis}s")


def expected_payoff(game: ZeroSumGame, x: MixedStrategy, y: MixedStrategy) -> float:
    """Attacker's expected degradation when rows play ``x`` and columns play ``y``."""
    m, n = game.shape
    _check_axis(x, m, "row")
    _check_axis(y, n, "column")
    return float(x.probs @ game.payoff @ y.probs)


def best_response_rows(game: ZeroSumGame, y: MixedStrategy, tol: float = TIE_TOL) -> frozenset[int]:
    """All attacker rows maximizing expected payoff against ``y`` (ties within ``tol``)."""
    _check_axis(y, game.shape[1], "column")
    row_values = game.payoff @ y.probs
    best = row_values.max()
    return frozenset(int(i) for i in np.flatnonzero(row_values >= best - tol))


def best_response_cols(game: ZeroSumGame, x: MixedStrategy, tol: float = TIE_TOL) -> frozenset[int]:
    """All defender columns minimizing the attacker's payoff against ``x``."""
    _check_axis(x, game.shape[0], "row")
    col_values = x.probs @ game.payoff
    best = col_values.min()
    return frozenset(int(j) for j in np.flatnonzero(col_values <= best + tol))


def prune_strictly_dominated_rows(game: ZeroSumGame) -> tuple[ZeroSumGame, tuple[int, ...]]:
    """Drop rows strictly dominated, in every column, by some surviving row.

    A strictly dominated row is never played at any equilibrium, so the game
    value is unchanged. Strict dominance is not affected by the order of
    removal, so one pass against the full row set is enough.
    """
    A = game.payoff
    removed = []
    for i in range(A.shape[0]):
        others = np.delete(A, i, axis=0)
        if others.size and np.any(np.all(others > A[i], axis=1)):
            removed.append(i)
    keep = [i for i in range(A.shape[0]) if i not in removed]
    return game.restrict_rows(keep), tuple(removed)
