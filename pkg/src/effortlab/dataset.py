"""Parsing, validation, filtering, and summaries for effort datasets.

The canonical schema is the Desharnais project table: twelve attributes
per project, with PointsNonAdjust and PointsAdjust derived from the other
size fields. Files circulate as CSV and as a minimal ARFF-like format;
both are accepted here, and CSV is the normative interchange format.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from importlib import resources
from typing import IO, Iterable

from .errors import DomainError, ParseError, SchemaError

COLUMNS = (
    "Project",
    "TeamExp",
    "ManagerExp",
    "YearEnd",
    "Length",
    "Effort",
    "Transactions",
    "Entities",
    "PointsNonAdjust",
    "Envergure",
    "PointsAdjust",
    "Language",
)

MISSING_MARKERS = frozenset({"", "?"})

ADJUST_TOLERANCE = 0.02

_FIELD_NAMES = (
    "project_id",
    "team_exp",
    "manager_exp",
    "year_end",
    "length",
    "effort",
    "transactions",
    "entities",
    "points_non_adjust",
    "envergure",
    "points_adjust",
    "language",
)

SUMMARY_ATTRIBUTES = (
    "team_exp",
    "manager_exp",
    "year_end",
    "length",
    "effort",
    "transactions",
    "entities",
    "points_non_adjust",
    "envergure",
    "points_adjust",
)


@dataclass(frozen=True, slots=True)
class RawRecord:
    """One data row as parsed; every non-id field may be absent (None)."""

    project_id: int
    team_exp: int | None = None
    manager_exp: int | None = None
    year_end: int | None = None
    length: int | None = None
    effort: float | None = None
    transactions: int | None = None
    entities: int | None = None
    points_non_adjust: float | None = None
    envergure: int | None = None
    points_adjust: float | None = None
    language: int | None = None

    def is_complete(self) -> bool:
        return all(getattr(self, f.name) is not None for f in fields(self))


@dataclass(frozen=True, slots=True)
class ProjectRecord:
    """One complete project row."""

    project_id: int
    team_exp: int
    manager_exp: int
    year_end: int
    length: int
    effort: float
    transactions: int
    entities: int
    points_non_adjust: float
    envergure: int
    points_adjust: float
    language: int


@dataclass(frozen=True, slots=True)
class Violation:
    """A failed derivation check on one record."""

    project_id: int
    attribute: str
    expected: float
    actual: float

    def __str__(self) -> str:
        return (f"project {self.project_id}: {self.attribute} expected "
                f"{self.expected:g}, got {self.actual:g}")


@dataclass(frozen=True, slots=True)
class AttributeSummary:
    count: int
    mean: float
    minimum: float
    maximum: float
    sd: float


@dataclass(frozen=True, slots=True)
class DatasetSummary:
    """Per-attribute descriptive statistics over complete records."""

    attributes: dict[str, AttributeSummary]
    count: int


def _parse_value(token: str, column: str, row: int):
    token = token.strip()
    if token in MISSING_MARKERS:
        return None
    try:
        if column in ("Effort", "PointsNonAdjust", "PointsAdjust"):
            return float(token)
        return int(token)
    except ValueError:
        raise ParseError(
            f"non-numeric token {token!r} in column {column}", row=row
        ) from None


def _records_from_rows(rows: Iterable[tuple[int, list[str]]],
                       columns: list[str]) -> list[RawRecord]:
    missing = [c for c in COLUMNS if c not in columns]
    if missing:
        raise SchemaError(f"missing attributes: {', '.join(missing)}")
    index = {c: columns.index(c) for c in COLUMNS}
    records = []
    seen = set()
    for row_no, tokens in rows:
        if len(tokens) != len(columns):
            raise ParseError(
                f"expected {len(columns)} fields, got {len(tokens)}",
                row=row_no,
            )
        values = {}
        for field, column in zip(_FIELD_NAMES, COLUMNS):
            values[field] = _parse_value(tokens[index[column]], column, row_no)
        project_id = values["project_id"]
        if project_id is None:
            raise ParseError("missing project id", row=row_no)
        if project_id in seen:
            raise SchemaError(f"duplicate project id {project_id}")
        seen.add(project_id)
        records.append(RawRecord(**values))
    return records


def _parse_csv(stream: IO[str]) -> list[RawRecord]:
    lines = [ln.rstrip("\r\n") for ln in stream]
    lines = [ln for ln in lines if ln.strip()]
    if not lines:
        raise ParseError("empty file", row=1)
    columns = [c.strip() for c in lines[0].split(",")]
    rows = ((i + 2, line.split(",")) for i, line in enumerate(lines[1:]))
    return _records_from_rows(rows, columns)


def _parse_arff(stream: IO[str]) -> list[RawRecord]:
    columns: list[str] = []
    rows: list[tuple[int, list[str]]] = []
    in_data = False
    for row_no, raw in enumerate(stream, start=1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        lowered = line.lower()
        if lowered.startswith("@relation"):
            continue
        if lowered.startswith("@attribute"):
            parts = line.split()
            if len(parts) < 2:
                raise ParseError("malformed attribute declaration", row=row_no)
            columns.append(parts[1].strip("'\""))
            continue
        if lowered.startswith("@data"):
            in_data = True
            continue
        if not in_data:
            raise ParseError(f"unexpected line {line!r}", row=row_no)
        rows.append((row_no, line.split(",")))
    if not columns:
        raise SchemaError("no attribute declarations found")
    return _records_from_rows(iter(rows), columns)


def parse_dataset(stream: IO[str], format: str = "csv") -> list[RawRecord]:
    """Parse a dataset stream into RawRecords, one per data row."""
    if format == "csv":
        return _parse_csv(stream)
    if format == "arff-like":
        return _parse_arff(stream)
    raise DomainError(f"unknown format {format!r}")


def load_dataset(path: str) -> list[RawRecord]:
    """Parse a dataset file, picking the format from its content."""
    with open(path, "r", encoding="utf-8") as fh:
        head = fh.read(1)
        fh.seek(0)
        fmt = "arff-like" if head in ("@", "%") else "csv"
        return parse_dataset(fh, format=fmt)


def bundled_dataset_path() -> str:
    """Filesystem path of the dataset shipped with the package."""
    return str(resources.files("effortlab").joinpath("data/desharnais.csv"))


def filter_complete(records: list[RawRecord]) -> list[ProjectRecord]:
    """Keep records with all twelve fields present, preserving order."""
    out = []
    for rec in records:
        if not rec.is_complete():
            continue
        if rec.effort <= 0:
            raise DomainError(
                f"project {rec.project_id}: effort must be positive"
            )
        if rec.points_non_adjust <= 0:
            raise DomainError(
                f"project {rec.project_id}: size must be positive"
            )
        if rec.language not in (1, 2, 3):
            raise SchemaError(
                f"project {rec.project_id}: language code {rec.language} "
                f"not in 1..3"
            )
        out.append(ProjectRecord(
            **{f.name: getattr(rec, f.name) for f in fields(RawRecord)}
        ))
    return out


def validate_derived(record: ProjectRecord) -> list[Violation]:
    """Check the two Table-derived size identities on one record."""
    violations = []
    expected_sum = record.transactions + record.entities
    if record.points_non_adjust != expected_sum:
        violations.append(Violation(
            record.project_id, "points_non_adjust",
            expected_sum, record.points_non_adjust,
        ))
    expected_adjust = record.points_non_adjust * (
        0.65 + 0.01 * record.envergure)
    if expected_adjust > 0:
        rel = abs(record.points_adjust - expected_adjust) / expected_adjust
        if rel > ADJUST_TOLERANCE:
            violations.append(Violation(
                record.project_id, "points_adjust",
                expected_adjust, record.points_adjust,
            ))
    return violations


def summarize(records: list[ProjectRecord]) -> DatasetSummary:
    """Descriptive statistics per numeric attribute."""
    if not records:
        raise DomainError("cannot summarize an empty dataset")
    attributes = {}
    n = len(records)
    for name in SUMMARY_ATTRIBUTES:
        values = [float(getattr(r, name)) for r in records]
        mean = sum(values) / n
        if n > 1:
            sd = math.sqrt(sum((v - mean) ** 2 for v in values) / (n - 1))
        else:
            sd = 0.0
        attributes[name] = AttributeSummary(
            count=n, mean=mean, minimum=min(values), maximum=max(values),
            sd=sd,
        )
    return DatasetSummary(attributes=attributes, count=n)


def serialize_records(records: Iterable[RawRecord | ProjectRecord]) -> str:
    """Render records back to canonical CSV text."""
    lines = [",".join(COLUMNS)]
    for rec in records:
        tokens = []
        for field in _FIELD_NAMES:
            value = getattr(rec, field)
            if value is None:
                tokens.append("?")
            elif isinstance(value, float) and value == int(value):
                tokens.append(str(int(value)))
            else:
                tokens.append(str(value))
        lines.append(",".join(tokens))
    return "\n".join(lines) + "\n"
