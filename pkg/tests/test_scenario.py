import hashlib
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transparency_games import (
    PayoffRecord,
    ScenarioTable,
    baseline_degradation,
    build_attack_game,
    build_attack_surrogate_game,
    build_surrogate_game,
    parse_table,
    serialize_table,
)
from transparency_games.scenario import (
    DATA_ENV_VAR,
    SURROGATES,
    TARGETS,
    BuildError,
    ParseError,
    ValidationError,
    bundled_data_dir,
    load_bundled,
    load_table,
)

CHECKSUMS = {
    "cifar10.csv": "9d350f21915f5398323103013d2058a1a8fad015d7915f5c0ae8e7324a3e98f8",
    "imagenet.csv": "a90b4087de2b000cf90763e3e9370ca83110b7bb8fa2affffe2180817cc960c7",
}


def synthetic_rows(dataset="toy", attacks=("alpha",), value=lambda a, s, t: 10.0):
    lines = ["dataset,attack,surrogate,target,degradation"]
    for t in TARGETS:
        lines.append(f"{dataset},no-attack,none,{t},5.00")
    for a in attacks:
        for t in TARGETS:
            for s in SURROGATES[:-1]:
                lines.append(f"{dataset},{a},{s},{t},{value(a, s, t):.2f}")
    return lines


@pytest.mark.parametrize("name, digest", sorted(CHECKSUMS.items()))
def test_bundled_checksums(name, digest):
    data = (bundled_data_dir() / name).read_bytes()
    assert hashlib.sha256(data).hexdigest() == digest


def test_bundled_cifar10_shape():
    table = load_table(bundled_data_dir() / "cifar10.csv")
    assert table.datasets == ("cifar10",)
    assert len(table.attacks("cifar10")) == 9
    assert len(table.records) == 9 * 8 + 2
    assert table.lookup("cifar10", "vni-fgsm", "median-def", "defended") == 29.47


def test_bundled_imagenet_baseline():
    table = parse_table((bundled_data_dir() / "imagenet.csv").read_bytes())
    assert table.lookup("imagenet", "no-attack", "none", "defended") == 28.34


def test_empty_stream_reports_no_datasets():
    with pytest.raises(ValidationError, match="no datasets"):
        parse_table(b"")


def test_env_var_overrides_data_dir(tmp_path, monkeypatch):
    (tmp_path / "toy.csv").write_text("\n".join(synthetic_rows()) + "\n")
    monkeypatch.setenv(DATA_ENV_VAR, str(tmp_path))
    assert load_bundled().datasets == ("toy",)


def test_parse_errors_carry_line_numbers():
    text = "\n".join(
        ["# comment", "dataset,attack,surrogate,target,degradation", "toy,a,undefended,defended", "toy,a,undefended,undefended,1.23456"]
    )
    with pytest.raises(ParseError) as info:
        parse_table(text)
    lines = [i.line for i in info.value.issues]
    assert lines == [3, 4]


def test_bad_header():
    with pytest.raises(ParseError, match="expected header"):
        parse_table("a,b,c\n")


def test_validation_lists_every_violation():
    lines = synthetic_rows(attacks=("alpha", "beta"))
    lines = [l for l in lines if l != "toy,no-attack,none,defended,5.00"]
    lines = [l for l in lines if l != "toy,beta,best-def,undefended,10.00"]
    lines.append("toy,alpha,median-def,defended,10.00")  # duplicate
    lines.append("toy,alpha,robust,defended,10.00")  # unknown surrogate
    lines.append("toy,gamma,undefended,hardened,10.00")  # unknown target
    lines.append("toy,alpha,none,undefended,10.00")  # none without no-attack
    lines.append("toy,delta,undefended,defended,120.00")  # out of range
    with pytest.raises(ValidationError) as info:
        parse_table("\n".join(lines))
    text = str(info.value)
    assert "duplicate key toy,alpha,median-def,defended" in text
    assert "unknown surrogate 'robust'" in text
    assert "unknown target 'hardened'" in text
    assert "surrogate 'none'" in text
    assert "outside [0, 100]" in text
    assert "missing no-attack baseline for toy, target defended" in text
    assert "missing cell toy,beta,best-def,undefended" in text
    assert "missing cell toy,delta,worst-def,defended" in text
    assert len(info.value.issues) >= 9


def test_round_trip_bundled(table):
    text = serialize_table(table)
    again = parse_table(text)
    assert again == table
    assert serialize_table(again) == text
    assert parse_table(serialize_table(table, "tree")) == table


def test_tree_format_accepts_plain_list():
    rows = [line.split(",") for line in synthetic_rows()[1:]]
    doc = [dict(zip(("dataset", "attack", "surrogate", "target"), r[:4]), degradation=float(r[4])) for r in rows]
    table = parse_table(json.dumps(doc).encode())
    assert table.attacks("toy") == ("alpha",)


def test_tree_format_rejects_bad_records():
    with pytest.raises(ParseError):
        parse_table('{"records": [{"dataset": "toy"}]}')
    with pytest.raises(ParseError):
        parse_table("[1, 2")


@settings(max_examples=50, deadline=None)
@given(
    st.lists(st.sampled_from(["a1", "b-2", "c.3", "dd"]), min_size=1, max_size=4, unique=True),
    st.lists(st.integers(0, 1_000_000), min_size=32, max_size=32),
)
def test_round_trip_property(attacks, cents):
    it = iter(cents * 2)
    lines = synthetic_rows(attacks=attacks, value=lambda a, s, t: 0.0)
    out = [lines[0]]
    for line in lines[1:]:
        head, _ = line.rsplit(",", 1)
        out.append(f"{head},{next(it) / 10_000:.4f}")
    table = parse_table("\n".join(out))
    assert parse_table(serialize_table(table)) == table


def test_build_surrogate_games(table):
    assert build_surrogate_game(table, "cifar10", "vni-fgsm").payoff.tolist() == [[85.55, 15.68], [29.82, 29.47]]
    assert build_surrogate_game(table, "imagenet", "vni-fgsm").payoff.tolist() == [[58.16, 30.01], [34.84, 36.41]]
    best = build_surrogate_game(table, "cifar10", "vni-fgsm", "best-def")
    assert best.payoff.tolist() == [[85.55, 15.68], [32.78, 27.84]]
    assert best.col_labels == ("undefended", "defended")
    assert best.row_labels == ("vni-fgsm/undefended", "vni-fgsm/defended")


def test_build_errors_name_missing_key(table):
    with pytest.raises(BuildError, match="unknown attack 'fgsm'"):
        build_surrogate_game(table, "cifar10", "fgsm")
    with pytest.raises(BuildError, match="unknown dataset 'mnist'"):
        build_attack_game(table, "mnist")
    with pytest.raises(BuildError, match="defended surrogate"):
        build_surrogate_game(table, "cifar10", "vni-fgsm", "undefended")


def test_build_attack_surrogate_imagenet(table):
    g = build_attack_surrogate_game(table, "imagenet")
    assert g.shape == (18, 2)
    rows = dict(zip(g.row_labels, g.payoff.tolist()))
    assert rows["ops/undefended"] == [67.96, 32.01]
    assert rows["vni-fgsm/defended"] == [34.84, 36.41]


def test_attack_surrogate_restricts_to_surrogate_game(table):
    g = build_attack_surrogate_game(table, "cifar10", "worst-def")
    for k, attack in enumerate(table.attacks("cifar10")):
        assert g.restrict_rows([2 * k, 2 * k + 1]) == build_surrogate_game(table, "cifar10", attack, "worst-def")


def test_single_attack_table_reduces_to_surrogate_game():
    lines = synthetic_rows(attacks=("solo",), value=lambda a, s, t: {"undefended": 50.0}.get(s, 20.0) + len(t))
    table = parse_table("\n".join(lines))
    assert build_attack_surrogate_game(table, "toy") == build_surrogate_game(table, "toy", "solo")


def test_build_attack_game(table):
    g = build_attack_game(table, "cifar10")
    assert g.shape == (9, 2)
    rows = dict(zip(g.row_labels, g.payoff.tolist()))
    assert rows["ops/undefended"] == [87.59, 16.89]
    imagenet = build_attack_game(table, "imagenet")
    assert imagenet.payoff[imagenet.row_labels.index("ops/undefended")].tolist() == [67.96, 32.01]


@pytest.mark.parametrize(
    "dataset, target, expected",
    [("cifar10", "defended", 12.28), ("imagenet", "undefended", 24.22), ("cifar10", "undefended", 5.98)],
)
def test_baselines(table, dataset, target, expected):
    assert baseline_degradation(table, dataset, target) == expected


def test_records_canonical_order():
    rec = [PayoffRecord("z", "no-attack", "none", "defended", 1.0), PayoffRecord("a", "no-attack", "none", "defended", 1.0)]
    assert [r.dataset for r in ScenarioTable(tuple(rec)).records] == ["a", "z"]
