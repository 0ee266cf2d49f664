"""Empirical payoff tables and the game families built from them.

A table holds measured accuracy degradation for every (dataset, attack,
surrogate class, target class) cell plus a no-attack baseline per target
class. Input is comma-separated text with the header
``dataset,attack,surrogate,target,degradation`` (``#`` starts a comment
line), or JSON with the same field names.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable

from .game import ZeroSumGame

NO_ATTACK = "no-attack"
SURROGATES = ("undefended", "worst-def", "median-def", "best-def", "none")
DEFENDED_SURROGATES = ("worst-def", "median-def", "best-def")
TARGETS = ("undefended", "defended")
FIELDS = ("dataset", "attack", "surrogate", "target", "degradation")
DEFAULT_SURROGATE = "median-def"
DATA_ENV_VAR = "TRANSPARENCY_GAMES_DATA"

_DECIMAL = re.compile(r"^-?\d+(\.\d{1,4})?$")
_TOKEN = re.compile(r"^[a-z0-9][a-z0-9_.-]*$")


@dataclass(frozen=True)
class Issue:
    line: int | None
    message: str

    def __str__(self):
        return f"line {self.line}: {self.message}" if self.line is not None else self.message


class TableError(ValueError):
    """A payoff table could not be accepted; ``issues`` lists every problem found."""

    def __init__(self, issues: Iterable[Issue]):
        self.issues = tuple(issues)
        super().__init__("\n".join(str(i) for i in self.issues))


class ParseError(TableError):
    pass


class ValidationError(TableError):
    pass


class BuildError(KeyError):
    """A game needs a cell or attack the table does not have."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


@dataclass(frozen=True)
class PayoffRecord:
    dataset: str
    attack: str
    surrogate: str
    target: str
    degradation: float

    @property
    def key(self) -> tuple[str, str, str, str]:
        return (self.dataset, self.attack, self.surrogate, self.target)

    def sort_key(self):
        return (
            self.dataset,
            self.attack != NO_ATTACK,
            self.attack,
            TARGETS.index(self.target),
            SURROGATES.index(self.surrogate),
        )


def _record_issues(rec: PayoffRecord) -> list[str]:
    problems = []
    for name in ("dataset", "attack"):
        if not _TOKEN.match(getattr(rec, name)):
            problems.append(f"{name} {getattr(rec, name)!r} is not a lowercase identifier")
    if rec.surrogate not in SURROGATES:
        problems.append(f"unknown surrogate {rec.surrogate!r} (expected one of {', '.join(SURROGATES)})")
    if rec.target not in TARGETS:
        problems.append(f"unknown target {rec.target!r} (expected one of {', '.join(TARGETS)})")
    if (rec.surrogate == "none") != (rec.attack == NO_ATTACK):
        problems.append(f"surrogate 'none' must go with attack '{NO_ATTACK}' and only with it")
    if not math.isfinite(rec.degradation) or not 0.0 <= rec.degradation <= 100.0:
        problems.append(f"degradation {rec.degradation} outside [0, 100]")
    return problems


@dataclass(frozen=True)
class ScenarioTable:
    records: tuple[PayoffRecord, ...]

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(sorted(self.records, key=PayoffRecord.sort_key)))
        object.__setattr__(self, "_index", {r.key: r for r in self.records})

    @classmethod
    def from_records(cls, records: Iterable[PayoffRecord], lines: Iterable[int | None] | None = None):
        """Validate ``records`` and build a table, reporting every violation at once."""
        records = list(records)
        lines = list(lines) if lines is not None else [None] * len(records)
        issues = []
        seen: dict[tuple, int | None] = {}
        for rec, line in zip(records, lines):
            issues.extend(Issue(line, p) for p in _record_issues(rec))
            if rec.key in seen:
                where = f" (first at line {seen[rec.key]})" if seen[rec.key] is not None else ""
                issues.append(Issue(line, f"duplicate key {','.join(rec.key)}{where}"))
            else:
                seen[rec.key] = line
        if not records:
            issues.append(Issue(None, "no datasets"))
        datasets = sorted({r.dataset for r in records})
        for ds in datasets:
            for target in TARGETS:
                if (ds, NO_ATTACK, "none", target) not in seen:
                    issues.append(Issue(None, f"missing no-attack baseline for {ds}, target {target}"))
            attacks = sorted({r.attack for r in records if r.dataset == ds and r.attack != NO_ATTACK})
            for attack in attacks:
                for target in TARGETS:
                    for surrogate in SURROGATES[:-1]:
                        if (ds, attack, surrogate, target) not in seen:
                            issues.append(
                                Issue(None, f"missing cell {ds},{attack},{surrogate},{target}")
                            )
        if issues:
            raise ValidationError(issues)
        return cls(tuple(records))

    @property
    def datasets(self) -> tuple[str, ...]:
        return tuple(sorted({r.dataset for r in self.records}))

    def attacks(self, dataset: str) -> tuple[str, ...]:
        self._require_dataset(dataset)
        return tuple(sorted({r.attack for r in self.records if r.dataset == dataset and r.attack != NO_ATTACK}))

    def lookup(self, dataset: str, attack: str, surrogate: str, target: str) -> float:
        try:
            return self._index[(dataset, attack, surrogate, target)].degradation
        except KeyError:
            raise BuildError(f"no cell {dataset},{attack},{surrogate},{target}") from None

    def restrict(self, dataset: str | None = None, attacks: Iterable[str] | None = None) -> "ScenarioTable":
        keep = set(attacks) | {NO_ATTACK} if attacks is not None else None
        return ScenarioTable(
            tuple(
                r
                for r in self.records
                if (dataset is None or r.dataset == dataset) and (keep is None or r.attack in keep)
            )
        )

    def merge(self, other: "ScenarioTable") -> "ScenarioTable":
        return ScenarioTable.from_records(self.records + other.records)

    def _require_dataset(self, dataset: str):
        if dataset not in self.datasets:
            raise BuildError(f"unknown dataset {dataset!r}; available: {', '.join(self.datasets)}")

    def _require_attack(self, dataset: str, attack: str):
        if attack not in self.attacks(dataset):
            raise BuildError(
                f"unknown attack {attack!r} for {dataset}; available: {', '.join(self.attacks(dataset))}"
            )


def _parse_decimal(text: str) -> float:
    text = text.strip()
    if not _DECIMAL.match(text):
        raise ValueError(f"degradation {text!r} is not a decimal with at most 4 fraction digits")
    return float(text)


def _parse_csv(text: str) -> tuple[list[PayoffRecord], list[int]]:
    records, lines, issues = [], [], []
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        cells = [c.strip() for c in next(csv.reader([raw]))]
        if not header_seen:
            header_seen = True
            if tuple(cells) != FIELDS:
                issues.append(Issue(lineno, f"expected header {','.join(FIELDS)}, got {raw.strip()!r}"))
                break
            continue
        if len(cells) != len(FIELDS):
            issues.append(Issue(lineno, f"expected {len(FIELDS)} fields, got {len(cells)}"))
            continue
        try:
            value = _parse_decimal(cells[4])
        except ValueError as exc:
            issues.append(Issue(lineno, str(exc)))
            continue
        records.append(PayoffRecord(*cells[:4], value))
        lines.append(lineno)
    if issues:
        raise ParseError(issues)
    return records, lines


def _parse_tree(text: str) -> tuple[list[PayoffRecord], list[int | None]]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError([Issue(exc.lineno, f"invalid JSON: {exc.msg}")]) from None
    items = doc.get("records") if isinstance(doc, dict) else doc
    if not isinstance(items, list):
        raise ParseError([Issue(None, "expected a list of records or an object with a 'records' list")])
    records, issues = [], []
    for n, item in enumerate(items):
        where = f"record {n}"
        if not isinstance(item, dict) or set(item) != set(FIELDS):
            issues.append(Issue(None, f"{where}: expected fields {', '.join(FIELDS)}"))
            continue
        value = item["degradation"]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            issues.append(Issue(None, f"{where}: degradation must be a number"))
            continue
        if not all(isinstance(item[f], str) for f in FIELDS[:4]):
            issues.append(Issue(None, f"{where}: {', '.join(FIELDS[:4])} must be strings"))
            continue
        records.append(PayoffRecord(*(item[f] for f in FIELDS[:4]), float(value)))
    if issues:
        raise ParseError(issues)
    return records, [None] * len(records)


def parse_table(source: bytes | str | io.IOBase) -> ScenarioTable:
    """Parse and validate a payoff table from CSV or JSON text.

    Raises ParseError for malformed rows and ValidationError for table-level
    problems; both carry the complete list of issues.
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError([Issue(None, f"not UTF-8: {exc}")]) from None
    source = source.lstrip("\ufeff")
    if source.lstrip()[:1] in ("[", "{"):
        records, lines = _parse_tree(source)
    else:
        records, lines = _parse_csv(source)
    return ScenarioTable.from_records(records, lines)


def _format_decimal(value: float) -> str:
    text = f"{value:.4f}"
    while text.endswith("0") and len(text.split(".")[1]) > 2:
        text = text[:-1]
    return text


def serialize_table(table: ScenarioTable, fmt: str = "csv") -> str:
    """Canonical text form of a table; ``parse_table`` reads it back unchanged."""
    if fmt == "tree":
        rows = [
            {f: getattr(r, f) for f in FIELDS[:4]} | {"degradation": float(_format_decimal(r.degradation))}
            for r in table.records
        ]
        return json.dumps({"records": rows}, indent=2) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown table format {fmt!r}")
    out = [",".join(FIELDS)]
    out += [f"{r.dataset},{r.attack},{r.surrogate},{r.target},{_format_decimal(r.degradation)}" for r in table.records]
    return "\n".join(out) + "\n"


def load_table(path: str | os.PathLike) -> ScenarioTable:
    """Read a table file, or merge every ``.csv``/``.json`` file in a directory."""
    path = Path(path)
    if path.is_dir():
        files = sorted(p for p in path.iterdir() if p.suffix in (".csv", ".json"))
        if not files:
            raise ValidationError([Issue(None, f"no .csv or .json tables in {path}")])
        records = []
        for f in files:
            records.extend(parse_table(f.read_bytes()).records)
        return ScenarioTable.from_records(records)
    return parse_table(path.read_bytes())


def bundled_data_dir() -> Path:
    override = os.environ.get(DATA_ENV_VAR)
    if override:
        return Path(override)
    return Path(str(resources.files(__package__) / "data"))


def load_bundled() -> ScenarioTable:
    """Both shipped datasets (CIFAR10 and ImageNet) in one table."""
    return load_table(bundled_data_dir())


def _check_surrogate(defended_surrogate: str):
    if defended_surrogate not in DEFENDED_SURROGATES:
        raise BuildError(
            f"defended surrogate must be one of {', '.join(DEFENDED_SURROGATES)}, got {defended_surrogate!r}"
        )


def row_label(attack: str, role: str) -> str:
    return f"{attack}/{role}"


def _surrogate_rows(table, dataset, attack, defended_surrogate):
    table._require_attack(dataset, attack)
    rows = []
    for role, surrogate in (("undefended", "undefended"), ("defended", defended_surrogate)):
        payoffs = [table.lookup(dataset, attack, surrogate, t) for t in TARGETS]
        rows.append((row_label(attack, role), payoffs))
    return rows


def _game(rows) -> ZeroSumGame:
    return ZeroSumGame(tuple(r[0] for r in rows), TARGETS, [r[1] for r in rows])


def build_surrogate_game(
    table: ScenarioTable, dataset: str, attack: str, defended_surrogate: str = DEFAULT_SURROGATE
) -> ZeroSumGame:
    """2x2 game for one attack: undefended vs defended surrogate against undefended vs defended target."""
    _check_surrogate(defended_surrogate)
    table._require_dataset(dataset)
    return _game(_surrogate_rows(table, dataset, attack, defended_surrogate))


def build_attack_surrogate_game(
    table: ScenarioTable, dataset: str, defended_surrogate: str = DEFAULT_SURROGATE
) -> ZeroSumGame:
    """The attacker picks an attack and a surrogate class: two rows per attack."""
    _check_surrogate(defended_surrogate)
    rows = []
    for attack in table.attacks(dataset):
        rows.extend(_surrogate_rows(table, dataset, attack, defended_surrogate))
    if not rows:
        raise BuildError(f"dataset {dataset!r} has no attacks")
    return _game(rows)


def build_attack_game(table: ScenarioTable, dataset: str) -> ZeroSumGame:
    """The attacker picks an attack but must use an undefended surrogate."""
    rows = [
        (row_label(attack, "undefended"), [table.lookup(dataset, attack, "undefended", t) for t in TARGETS])
        for attack in table.attacks(dataset)
    ]
    if not rows:
        raise BuildError(f"dataset {dataset!r} has no attacks")
    return _game(rows)


def baseline_degradation(table: ScenarioTable, dataset: str, target: str) -> float:
    """Degradation with clean inputs (100 minus benign accuracy)."""
    table._require_dataset(dataset)
    return table.lookup(dataset, NO_ATTACK, "none", target)
