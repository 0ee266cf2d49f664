import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

sys.path.insert(0, str(Path(__file__).parent))

from transparency_games import ZeroSumGame, load_bundled  # noqa: E402

CIFAR_VNI = [[85.55, 15.68], [29.82, 29.47]]
IMAGENET_VNI = [[58.16, 30.01], [34.84, 36.41]]


@pytest.fixture(scope="session")
def table():
    return load_bundled()


@pytest.fixture(scope="session")
def bundled_games(table):
    """Every Surrogate, A&S, and Attack game built from the shipped data."""
    from transparency_games import build_attack_game, build_attack_surrogate_game, build_surrogate_game

    games = {}
    for ds in table.datasets:
        for attack in table.attacks(ds):
            games[f"{ds}/surrogate/{attack}"] = build_surrogate_game(table, ds, attack)
        games[f"{ds}/attack-surrogate"] = build_attack_surrogate_game(table, ds)
        games[f"{ds}/attack"] = build_attack_game(table, ds)
    return games


def game_matrices(max_rows=6, max_cols=6, coarse=False):
    """Random payoff matrices; ``coarse`` draws 2-decimal values so ties and degeneracy show up."""
    shapes = st.tuples(st.integers(1, max_rows), st.integers(1, max_cols))
    if coarse:
        elements = st.integers(0, 20).map(lambda k: k * 5.0)
    else:
        elements = st.floats(-100, 100, allow_nan=False, allow_infinity=False)
    return shapes.flatmap(lambda s: arrays(np.float64, s, elements=elements))


def games(**kwargs):
    return game_matrices(**kwargs).map(ZeroSumGame.from_matrix)


def strategies_for(n):
    return arrays(np.float64, n, elements=st.floats(0, 1, allow_nan=False)).filter(lambda w: w.sum() > 1e-3)


_acceptance_results = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance_results[report.nodeid.split("::")[-1]] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(_acceptance_results.items()):
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
