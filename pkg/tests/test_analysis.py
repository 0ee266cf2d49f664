import json

import pytest
from oracles import kx2_value

from transparency_games import (
    build_attack_game,
    build_attack_surrogate_game,
    build_surrogate_game,
    parse_table,
    solve_2x2_closed_form,
    solve_minimax,
    transparency_cost,
)
from transparency_games.analysis import (
    as_game_summary,
    mixing_report,
    round_display,
    transparency_report,
    underestimation_report,
)
from transparency_games.scenario import SURROGATES, TARGETS


def toy_table(cells, baseline=(5.0, 10.0)):
    """``cells`` maps attack -> {(surrogate, target): value}; missing cells default to 0."""
    lines = ["dataset,attack,surrogate,target,degradation"]
    lines += [f"toy,no-attack,none,{t},{b:.2f}" for t, b in zip(TARGETS, baseline)]
    for attack, values in cells.items():
        for t in TARGETS:
            for s in SURROGATES[:-1]:
                lines.append(f"toy,{attack},{s},{t},{values.get((s, t), 0.0):.2f}")
    return parse_table("\n".join(lines))


@pytest.mark.parametrize(
    "value, shown",
    [(0.285, "0.29"), (0.284999, "0.28"), (1.005, "1.01"), (0.0, "0.00"), (2.675, "2.68")],
)
def test_half_up_rounding(value, shown):
    assert f"{round_display(value):.2f}" == shown


def test_transparency_cifar10(table):
    rep = transparency_report(table, "cifar10")
    expected = {
        "admix": 0.28, "autoattack": 1.04, "bia": 0, "cdtp": 0.05, "lgv": 0,
        "ops": 0.49, "pgn": 0.42, "ssah": 0, "vni-fgsm": 0,
    }  # fmt: skip
    for attack, cost in expected.items():
        assert rep.cost_for(attack) == pytest.approx(cost, abs=0.02)
    assert rep.worse_off_count == 5
    assert rep.mean_nonzero_cost == pytest.approx(0.46, abs=0.02)


def test_transparency_imagenet(table):
    rep = transparency_report(table, "imagenet")
    assert rep.worse_off_count == 6
    assert rep.mean_nonzero_cost == pytest.approx(0.33, abs=0.02)


def test_transparency_all_pure_saddles():
    # The defended surrogate row dominates, giving a saddle at (defended, undefended).
    cells = {
        a: {("undefended", "undefended"): 20.0, ("undefended", "defended"): 10.0,
            ("median-def", "undefended"): 25.0, ("median-def", "defended"): 30.0}
        for a in ("a1", "a2")
    }  # fmt: skip
    rep = transparency_report(toy_table(cells), "toy")
    assert [e.cost for e in rep.entries] == [0.0, 0.0]
    assert rep.worse_off_count == 0
    assert rep.mean_nonzero_cost == 0.0


def test_transparency_costs_match_per_game(table):
    for ds in table.datasets:
        rep = transparency_report(table, ds)
        for e in rep.entries:
            direct = transparency_cost(build_surrogate_game(table, ds, e.attack))
            assert e.cost == pytest.approx(max(direct, 0.0), abs=1e-9)
            assert e.cost >= 0


def test_mixing_report_rows(table):
    cifar = mixing_report(table, "cifar10")
    assert [e.attack for e in cifar.entries] == ["admix", "autoattack", "cdtp", "ops", "pgn", "vni-fgsm"]
    admix = cifar.entry("admix")
    assert admix.attacker_p_undefended == pytest.approx(2.45, abs=0.05)
    assert admix.defender_p_undefended == pytest.approx(13.84, abs=0.05)
    vni = cifar.entry("vni-fgsm")
    assert (vni.attacker_p_undefended, vni.defender_p_undefended, vni.kind) == (0.0, 0.0, "pure")
    auto = mixing_report(table, "imagenet").entry("autoattack")
    assert auto.attacker_p_undefended == pytest.approx(16.72, abs=0.05)
    assert auto.defender_p_undefended == pytest.approx(14.52, abs=0.05)


def test_mixing_report_filters(table):
    assert [e.attack for e in mixing_report(table, "cifar10", include=["bia"]).entries] == ["bia"]
    rep = mixing_report(table, "imagenet", include=lambda a: a.startswith("p"))
    assert [e.attack for e in rep.entries] == ["pgn"]


def test_mixing_matches_closed_form(table):
    for ds in table.datasets:
        for e in mixing_report(table, ds).entries:
            if e.kind != "mixed":
                continue
            cf = solve_2x2_closed_form(build_surrogate_game(table, ds, e.attack))
            assert e.attacker_p_undefended / 100 == pytest.approx(cf.row_strategy.probs[0], abs=1e-6)
            assert e.defender_p_undefended / 100 == pytest.approx(cf.col_strategy.probs[0], abs=1e-6)


def test_underestimation(table):
    cifar = underestimation_report(table, "cifar10")
    assert cifar.difference == pytest.approx(12.58, abs=0.05)
    assert cifar.factor == pytest.approx(3.73, abs=0.02)
    imagenet = underestimation_report(table, "imagenet")
    assert imagenet.difference == pytest.approx(4.22, abs=0.05)
    assert imagenet.factor == pytest.approx(2.15, abs=0.02)
    for rep in (cifar, imagenet):
        assert rep.difference == rep.v_attack_surrogate - rep.v_attack_only
        assert rep.factor == (rep.v_attack_surrogate - rep.baseline_defended) / (
            rep.v_attack_only - rep.baseline_defended
        )


def test_underestimation_values_match_envelope_oracle(table):
    for ds in table.datasets:
        rep = underestimation_report(table, ds)
        assert rep.v_attack_surrogate == pytest.approx(kx2_value(build_attack_surrogate_game(table, ds).payoff)[0], abs=1e-9)
        assert rep.v_attack_only == pytest.approx(kx2_value(build_attack_game(table, ds).payoff)[0], abs=1e-9)


def test_cifar10_attack_game_is_ops_on_defended(table):
    # 16.89 is the largest undefended-surrogate entry against defended targets,
    # and every row's defended entry beats its undefended one only for ops.
    g = build_attack_game(table, "cifar10")
    res = solve_minimax(g)
    assert res.value == pytest.approx(16.89, abs=1e-9)
    assert g.row_labels[res.row_strategy.support[0]] == "ops/undefended"
    assert g.col_labels[res.col_strategy.support[0]] == "defended"
    assert g.payoff[:, 1].max() == 16.89


def test_underestimation_identical_rows_gives_unit_factor():
    cells = {"a1": {(s, t): v for s in SURROGATES[:-1] for t, v in zip(TARGETS, (40.0, 20.0))}}
    rep = underestimation_report(toy_table(cells), "toy")
    assert rep.difference == 0.0
    assert rep.factor == 1.0


def test_as_summary_imagenet(table):
    s = as_game_summary(table, "imagenet")
    assert s.attacker_support == pytest.approx({"ops/undefended": 0.0418, "vni-fgsm/defended": 0.9582}, abs=1e-3)
    assert s.defender_support["undefended"] == pytest.approx(0.1173, abs=1e-3)
    assert s.cost == pytest.approx(0.18, abs=0.02)


def test_as_summary_cifar10(table):
    s = as_game_summary(table, "cifar10")
    assert s.nash.kind == "pure"
    assert s.attacker_support == {"vni-fgsm/defended": 1.0}
    assert s.defender_support == {"defended": 1.0}
    assert s.cost == 0.0


def test_as_summary_single_attack_matches_surrogate_game():
    cells = {"solo": {("undefended", "undefended"): 60.0, ("undefended", "defended"): 20.0,
                      ("median-def", "undefended"): 25.0, ("median-def", "defended"): 30.0}}  # fmt: skip
    table = toy_table(cells)
    s = as_game_summary(table, "toy")
    direct = solve_minimax(build_surrogate_game(table, "toy", "solo"))
    assert s.nash.value == pytest.approx(direct.value)
    assert s.nash.attacker.probs == pytest.approx(direct.row_strategy.probs)
    assert s.nash.defender.probs == pytest.approx(direct.col_strategy.probs)


def test_value_ordering(table):
    for ds in table.datasets:
        attack_only = solve_minimax(build_attack_game(table, ds)).value
        s = as_game_summary(table, ds)
        assert attack_only <= s.nash.value + 1e-9 <= s.stackelberg.value + 2e-9


@pytest.mark.parametrize("fmt_name", ["text", "csv", "tree"])
def test_reports_deterministic_and_carry_formula(table, fmt_name):
    for build in (transparency_report, mixing_report, underestimation_report):
        first = build(table, "imagenet").as_report().render(fmt_name)
        second = build(table, "imagenet").as_report().render(fmt_name)
        assert first == second
        assert "formula" in first


def test_tree_serialization_is_json(table):
    doc = json.loads(transparency_report(table, "cifar10").as_report().render("tree"))
    assert doc["summary"]["worse off"] == "5 / 9"
    assert len(doc["rows"]) == 9
