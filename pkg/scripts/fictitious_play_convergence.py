"""Fictitious-play gap to the LP value on every bundled game, at log-spaced checkpoints."""

import argparse

from transparency_games import (
    build_attack_game,
    build_attack_surrogate_game,
    build_surrogate_game,
    fictitious_play,
    load_bundled,
    solve_minimax,
)


def bundled_games(table):
    for ds in table.datasets:
        for attack in table.attacks(ds):
            yield f"{ds}/surrogate/{attack}", build_surrogate_game(table, ds, attack)
        yield f"{ds}/attack-surrogate", build_attack_surrogate_game(table, ds)
        yield f"{ds}/attack", build_attack_game(table, ds)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--iterations", type=int, default=100_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--checkpoints", type=int, nargs="*", default=[100, 1_000, 10_000, 100_000])
    args = parser.parse_args()

    marks = [c for c in args.checkpoints if c <= args.iterations]
    print("game".ljust(30) + "".join(f"{f'gap@{c}':>12}" for c in marks) + f"{'final gap':>12}")
    worst = 0.0
    for name, game in bundled_games(load_bundled()):
        value = solve_minimax(game).value
        trace = fictitious_play(game, args.iterations, args.seed)
        history = trace.value_history
        gaps = []
        for c in marks:
            # Latest recorded checkpoint at or before c.
            t_value = max((h for h in history if h[0] <= c), key=lambda h: h[0])[1]
            gaps.append(abs(t_value - value))
        final = abs(trace.empirical_value - value)
        worst = max(worst, final)
        print(name.ljust(30) + "".join(f"{g:12.4f}" for g in gaps) + f"{final:12.4f}")
    print(f"worst final gap: {worst:.4f}")


if __name__ == "__main__":
    main()
