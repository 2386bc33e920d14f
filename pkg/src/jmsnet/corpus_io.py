"""Loading, validating and slicing the journal corpus.

Records come from RFC 4180 CSV (header row mandatory) or JSON-lines files
with the fixed column set in :data:`FIELDS`.
"""

from __future__ import annotations

import csv
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Literal

FIELDS = (
    "id",
    "title",
    "mission",
    "jms_kind",
    "sjr",
    "h_index",
    "coverage_years",
    "quartile",
    "access",
    "publisher_country",
)

MISSING = "missing"

JMS_KINDS = ("overview", "aims_scope_other", "both")
QUARTILES = ("Q1", "Q2", "Q3", "Q4")
ACCESS = ("open_access", "non_open_access")

# Separator used when an overview and an aims/scope text are merged into one JMS.
JMS_MERGE_SEPARATOR = " "


class Access(str, Enum):
    OPEN = "open_access"
    CLOSED = "non_open_access"


@dataclass(frozen=True)
class JournalRecord:
    id: str
    title: str
    mission: str
    jms_kind: str
    sjr: float
    h_index: int
    coverage_years: int
    quartile: str | None
    access: str
    publisher_country: str | None

    def to_row(self) -> dict[str, str]:
        row = {}
        for name, value in asdict(self).items():
            if value is None:
                row[name] = ""
            elif isinstance(value, float):
                row[name] = repr(value)
            else:
                row[name] = str(value)
        return row


@dataclass(frozen=True)
class RowError:
    row: int
    field: str
    reason: str

    def __str__(self) -> str:
        return f"row {self.row}: {self.field}: {self.reason}"


class CorpusError(ValueError):
    """Fatal ingestion problem; ``diagnostics`` holds any row-level errors."""

    def __init__(self, message: str, diagnostics: Iterable[RowError] = ()):
        super().__init__(message)
        self.diagnostics = list(diagnostics)

    def to_json(self) -> str:
        return json.dumps(
            {"error": str(self), "diagnostics": [asdict(d) for d in self.diagnostics]},
            indent=2,
        )


@dataclass(frozen=True)
class Corpus:
    records: tuple[JournalRecord, ...]
    source: str = ""
    loaded_at: str = ""
    diagnostics: tuple[RowError, ...] = field(default=(), compare=False)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[JournalRecord]:
        return iter(self.records)

    def ids(self) -> list[str]:
        return [r.id for r in self.records]

    def derive(self, records: Iterable[JournalRecord]) -> Corpus:
        """Sub-corpus keeping this corpus' provenance."""
        return Corpus(tuple(records), self.source, self.loaded_at)


def merge_mission(overview: str, aims_scope: str) -> str:
    """Single JMS text from an overview and an aims/scope text."""
    parts = [p.strip() for p in (overview, aims_scope) if p and p.strip()]
    return JMS_MERGE_SEPARATOR.join(parts)


def _parse_record(raw: dict, row: int) -> tuple[JournalRecord | None, list[RowError]]:
    errors: list[RowError] = []

    def text(name: str) -> str:
        value = raw.get(name)
        return "" if value is None else str(value).strip()

    def number(name: str, kind: type, minimum: float) -> float | int | None:
        value = text(name)
        try:
            parsed = kind(value)
        except ValueError:
            if kind is int:
                # JSON-lines may carry integral floats ("12.0")
                try:
                    as_float = float(value)
                except ValueError:
                    as_float = math.nan
                if as_float.is_integer():
                    parsed = int(as_float)
                else:
                    errors.append(RowError(row, name, f"not an integer: {value!r}"))
                    return None
            else:
                errors.append(RowError(row, name, f"not a number: {value!r}"))
                return None
        if isinstance(parsed, float) and not math.isfinite(parsed):
            errors.append(RowError(row, name, f"not finite: {value!r}"))
            return None
        if parsed < minimum:
            errors.append(RowError(row, name, f"must be >= {minimum}, got {value}"))
            return None
        return parsed

    rec_id = text("id")
    if not rec_id:
        errors.append(RowError(row, "id", "empty id"))
    mission = text("mission")
    if not mission:
        errors.append(RowError(row, "mission", "empty JMS"))
    jms_kind = text("jms_kind")
    if jms_kind not in JMS_KINDS:
        errors.append(RowError(row, "jms_kind", f"invalid jms_kind {jms_kind!r}"))
    sjr = number("sjr", float, 0)
    h_index = number("h_index", int, 0)
    coverage = number("coverage_years", int, 1)
    quartile = text("quartile") or None
    if quartile is not None and quartile not in QUARTILES:
        errors.append(RowError(row, "quartile", f"invalid quartile {quartile!r}"))
    access = text("access")
    if access not in ACCESS:
        errors.append(RowError(row, "access", f"invalid access {access!r}"))
    country = text("publisher_country").upper() or None
    if country is not None and not (len(country) == 2 and country.isascii() and country.isalpha()):
        errors.append(
            RowError(row, "publisher_country", f"not an ISO-3166 alpha-2 code: {country!r}")
        )

    if errors:
        return None, errors
    record = JournalRecord(
        id=rec_id,
        title=text("title"),
        mission=mission,
        jms_kind=jms_kind,
        sjr=float(sjr),
        h_index=int(h_index),
        coverage_years=int(coverage),
        quartile=quartile,
        access=access,
        publisher_country=country,
    )
    return record, []


def _read_csv(path: Path) -> Iterator[tuple[int, dict]]:
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames
        if header is None:
            raise CorpusError(f"{path}: missing header row")
        header = [h.strip() for h in header]
        missing = [f for f in FIELDS if f not in header]
        if missing or len(set(header)) != len(header):
            raise CorpusError(f"{path}: malformed header, missing columns {missing}")
        reader.fieldnames = header
        for raw in reader:
            if None in raw:
                raise CorpusError(f"{path}: line {reader.line_num} has extra fields")
            # row numbers count data rows from 1, header excluded
            yield reader.line_num - 1, raw


def _read_jsonl(path: Path) -> Iterator[tuple[int, dict]]:
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}: line {lineno}: invalid JSON ({exc.msg})") from exc
            if not isinstance(raw, dict):
                raise CorpusError(f"{path}: line {lineno}: expected an object")
            missing = [f for f in FIELDS if f not in raw]
            if missing:
                raise CorpusError(f"{path}: line {lineno}: missing fields {missing}")
            yield lineno, raw


def load_corpus(
    path: str | Path,
    format: Literal["csv", "jsonl"] | None = None,
    strict: bool = True,
) -> Corpus:
    """Read a corpus file into typed records.

    Args:
        path: CSV or JSON-lines file.
        format: ``"csv"`` or ``"jsonl"``; inferred from the suffix when omitted.
        strict: when True any bad row aborts the load (all-or-nothing);
            otherwise bad rows are skipped and reported in ``Corpus.diagnostics``.

    Raises:
        CorpusError: malformed header, duplicate id, or (strict mode) bad rows.
    """
    path = Path(path)
    if format is None:
        format = "jsonl" if path.suffix.lower() in (".jsonl", ".ndjson") else "csv"
    if format not in ("csv", "jsonl"):
        raise CorpusError(f"unknown corpus format {format!r}")
    rows = _read_csv(path) if format == "csv" else _read_jsonl(path)

    records: list[JournalRecord] = []
    diagnostics: list[RowError] = []
    seen: dict[str, int] = {}
    for row, raw in rows:
        record, errors = _parse_record(raw, row)
        if errors:
            diagnostics.extend(errors)
            continue
        if record.id in seen:
            raise CorpusError(
                f"{path}: duplicate id {record.id!r} (rows {seen[record.id]} and {row})",
                diagnostics,
            )
        seen[record.id] = row
        records.append(record)

    if diagnostics and strict:
        raise CorpusError(f"{path}: {len(diagnostics)} invalid field(s)", diagnostics)
    loaded_at = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return Corpus(tuple(records), str(path), loaded_at, tuple(diagnostics))


def write_corpus(corpus: Corpus | Iterable[JournalRecord], path: str | Path,
                 format: Literal["csv", "jsonl"] | None = None) -> None:
    path = Path(path)
    if format is None:
        format = "jsonl" if path.suffix.lower() in (".jsonl", ".ndjson") else "csv"
    records = list(corpus)
    with path.open("w", newline="", encoding="utf-8") as fh:
        if format == "csv":
            writer = csv.DictWriter(fh, fieldnames=FIELDS, lineterminator="\r\n")
            writer.writeheader()
            for record in records:
                writer.writerow(record.to_row())
        else:
            for record in records:
                fh.write(json.dumps(asdict(record), ensure_ascii=False) + "\n")


def report_diagnostics(diagnostics: Iterable[RowError], as_json: bool = False, stream=None) -> None:
    stream = stream or sys.stderr
    diagnostics = list(diagnostics)
    if as_json:
        stream.write(json.dumps([asdict(d) for d in diagnostics], indent=2) + "\n")
    else:
        for d in diagnostics:
            stream.write(f"{d}\n")


def slice_by_metric_percentile(
    corpus: Corpus,
    fraction: float,
    end: Literal["top", "bottom"] = "top",
    metric: str = "sjr",
) -> Corpus:
    """The ``ceil(fraction * n)`` records at one end of the metric ranking.

    Ranking is descending for ``top`` and ascending for ``bottom``; ties are
    broken by ascending id in both cases.
    """
    if not corpus.records:
        raise ValueError("cannot slice an empty corpus")
    if not 0 < fraction <= 1:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    if end not in ("top", "bottom"):
        raise ValueError(f"end must be 'top' or 'bottom', got {end!r}")
    if metric not in ("sjr",):
        raise ValueError(f"unsupported metric {metric!r}")
    absent = [r.id for r in corpus.records if getattr(r, metric, None) is None]
    if absent:
        raise ValueError(f"metric {metric!r} absent on records: {', '.join(absent)}")

    n = len(corpus.records)
    # round() guards against 0.1 * 30 == 3.0000000000000004
    count = math.ceil(round(fraction * n, 9))
    sign = -1.0 if end == "top" else 1.0
    ranked = sorted(corpus.records, key=lambda r: (sign * getattr(r, metric), r.id))
    return corpus.derive(ranked[:count])


def group_by(corpus: Corpus, key: Literal["access", "quartile", "publisher_country"]
             ) -> dict[str, Corpus]:
    """Partition records by ``key``; records lacking it land in ``"missing"``.

    Groups appear in sorted key order with ``"missing"`` last.
    """
    if key not in ("access", "quartile", "publisher_country"):
        raise ValueError(f"cannot group by {key!r}")
    buckets: dict[str, list[JournalRecord]] = {}
    for record in corpus.records:
        value = getattr(record, key)
        buckets.setdefault(MISSING if value is None else value, []).append(record)
    order = sorted(k for k in buckets if k != MISSING)
    if MISSING in buckets:
        order.append(MISSING)
    return {k: corpus.derive(buckets[k]) for k in order}
