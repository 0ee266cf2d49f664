"""Print the transparency-cost, mixing, A&S and underestimation results from the bundled data."""

import argparse

from transparency_games import load_bundled, load_table
from transparency_games.analysis import (
    FORMATS,
    as_game_summary,
    mixing_report,
    transparency_report,
    underestimation_report,
)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--data", default=None, help="table file or directory (default: bundled data)")
    parser.add_argument("--format", choices=FORMATS, default="text")
    args = parser.parse_args()

    table = load_table(args.data) if args.data else load_bundled()
    for build in (transparency_report, mixing_report, underestimation_report):
        for ds in table.datasets:
            print(build(table, ds).as_report().render(args.format))
    for ds in table.datasets:
        print(as_game_summary(table, ds).render(args.format))


if __name__ == "__main__":
    main()
