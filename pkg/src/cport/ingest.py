"""Portfolio, ledger and weights file parsing.

Validation is exhaustive: every bad field of every record is collected and
raised together in one :class:`ValidationError`, since portfolio files are
maintained by hand.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from cport.errors import DomainError, ParseError, UnknownReferenceError, ValidationError
from cport.metrics import (
    Bundle,
    CPortVector,
    InnovationMatrix,
    StandardsLedger,
    TrlStage,
    WeightKind,
    WeightVector,
    cport_vector,
    normalize_weights,
    standardization_merit,
    trl_stage,
)

CSV_COLUMNS = ("id", "port_id", "title", "cost", "cost_unit", "start_year", "trl", "bundle")
YEAR_RANGE = (1990, 2100)


class CostUnit(str, Enum):
    KEUR = "kEUR"
    MEUR = "MEUR"


@dataclass(frozen=True)
class ProjectRecord:
    id: str
    port_id: str
    cost: float
    cost_unit: CostUnit
    start_year: int
    trl: int
    bundle: Bundle
    title: str | None = None

    def __post_init__(self) -> None:
        problems = _record_problems(self)
        if problems:
            raise DomainError(f"record {self.id!r}: " + "; ".join(problems))

    @property
    def cost_meur(self) -> float:
        if self.cost_unit is CostUnit.KEUR:
            return self.cost / 1000.0
        return self.cost

    @property
    def stage(self) -> TrlStage:
        return trl_stage(self.trl)

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "port_id": self.port_id,
            "title": self.title,
            "cost": self.cost,
            "cost_unit": self.cost_unit.value,
            "start_year": self.start_year,
            "trl": self.trl,
            "bundle": self.bundle.value,
        }


def _record_problems(rec: ProjectRecord) -> list[str]:
    problems = []
    if not rec.id:
        problems.append("id is empty")
    if not rec.port_id:
        problems.append("port_id is empty")
    if not math.isfinite(rec.cost) or rec.cost < 0:
        problems.append(f"cost must be finite and >= 0, got {rec.cost!r}")
    if not YEAR_RANGE[0] <= rec.start_year <= YEAR_RANGE[1]:
        problems.append(f"start_year {rec.start_year} outside {YEAR_RANGE[0]}..{YEAR_RANGE[1]}")
    if not 1 <= rec.trl <= 9:
        problems.append(f"trl {rec.trl} outside 1..9")
    return problems


@dataclass(frozen=True)
class TimeWindow:
    start_year: int
    end_year: int
    label: str = ""

    def __post_init__(self) -> None:
        if self.start_year > self.end_year:
            raise DomainError(
                f"window start {self.start_year} is after its end {self.end_year}"
            )
        if not self.label:
            object.__setattr__(self, "label", f"{self.start_year}-{self.end_year}")

    def __contains__(self, year: int) -> bool:
        return self.start_year <= year <= self.end_year

    @classmethod
    def parse(cls, text: str) -> TimeWindow:
        """Parse ``START:END`` (inclusive years); a bare ``YEAR`` means one year."""
        parts = text.strip().split(":")
        try:
            years = [int(p) for p in parts]
        except ValueError:
            raise DomainError(f"bad window {text!r}, expected START:END") from None
        if len(years) == 1:
            years *= 2
        if len(years) != 2:
            raise DomainError(f"bad window {text!r}, expected START:END")
        return cls(years[0], years[1])


@dataclass(frozen=True)
class PortSnapshot:
    """Everything needed to evaluate one port's C-Port Vector for one window.

    ``rho_override`` replaces the ledger-derived merit factor when set; exactly
    one of ``ledger`` and ``rho_override`` must be given.
    """

    port_id: str
    window: TimeWindow
    matrix: InnovationMatrix
    a: WeightVector
    w: WeightVector
    ledger: StandardsLedger | None = None
    rho_override: float | None = None

    def __post_init__(self) -> None:
        if (self.ledger is None) == (self.rho_override is None):
            raise DomainError(
                f"port {self.port_id!r}: rho needs exactly one of a standards ledger or an explicit value"
            )
        if self.rho_override is not None and not 0.0 <= self.rho_override <= 1.0:
            raise DomainError(f"rho must lie in [0, 1], got {self.rho_override!r}")

    @property
    def rho(self) -> float:
        if self.rho_override is not None:
            return float(self.rho_override)
        return standardization_merit(self.ledger)

    def vector(self) -> CPortVector:
        return cport_vector(self.rho, self.a, self.matrix, self.w, window=self.window.label)


# -- decoding helpers -------------------------------------------------------


def _decode(data: bytes | str, source: str) -> str:
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise ParseError(f"not valid UTF-8 at byte {exc.start}", source) from None


def _load_json(data: bytes | str, source: str) -> Any:
    text = _decode(data, source)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}", source
        ) from None


def _as_int(value: Any) -> int | None:
    if isinstance(value, bool):
        return None
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value.strip())
        except ValueError:
            return None
    return None


def _as_float(value: Any) -> float | None:
    if isinstance(value, bool):
        return None
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(value.strip())
        except ValueError:
            return None
    return None


def _build_record(raw: dict[str, Any], where: str) -> tuple[ProjectRecord | None, list[str]]:
    """Validate one raw mapping, returning the record or every problem found."""
    problems: list[str] = []

    def fail(msg: str) -> None:
        problems.append(f"{where}: {msg}")

    rec_id = raw.get("id")
    if not isinstance(rec_id, str) or not rec_id.strip():
        fail("id must be a non-empty string")
        rec_id = None
    else:
        rec_id = rec_id.strip()
        where = f"{where} (id {rec_id})"

    port_id = raw.get("port_id")
    if not isinstance(port_id, str) or not port_id.strip():
        fail("port_id must be a non-empty string")

    title = raw.get("title")
    if title is not None and not isinstance(title, str):
        fail("title must be a string when present")

    cost = _as_float(raw.get("cost"))
    if cost is None or not math.isfinite(cost) or cost < 0:
        fail(f"cost must be a finite number >= 0, got {raw.get('cost')!r}")

    unit = raw.get("cost_unit")
    if unit not in {u.value for u in CostUnit}:
        fail(f"cost_unit must be kEUR or MEUR, got {unit!r}")

    year = _as_int(raw.get("start_year"))
    if year is None:
        fail(f"start_year must be an integer, got {raw.get('start_year')!r}")
    elif not YEAR_RANGE[0] <= year <= YEAR_RANGE[1]:
        fail(f"start_year {year} outside {YEAR_RANGE[0]}..{YEAR_RANGE[1]}")

    trl = _as_int(raw.get("trl"))
    if trl is None or not 1 <= trl <= 9:
        fail(f"trl must be an integer 1..9, got {raw.get('trl')!r}")

    bundle = raw.get("bundle")
    if bundle not in {b.value for b in Bundle}:
        fail(f"bundle must be one of Nv, Fr, Mb, St, got {bundle!r}")

    if problems:
        return None, problems
    record = ProjectRecord(
        id=rec_id,
        port_id=port_id.strip(),
        title=title or None,
        cost=cost,
        cost_unit=CostUnit(unit),
        start_year=year,
        trl=trl,
        bundle=Bundle(bundle),
    )
    return record, []


def _json_rows(data: bytes | str, source: str) -> list[tuple[str, dict[str, Any]]]:
    doc = _load_json(data, source)
    if not isinstance(doc, dict) or not isinstance(doc.get("records"), list):
        raise ParseError('portfolio JSON must be an object with a "records" array', source)
    rows = []
    problems = []
    for i, item in enumerate(doc["records"]):
        if not isinstance(item, dict):
            problems.append(f"records[{i}]: expected an object, got {type(item).__name__}")
        else:
            rows.append((f"records[{i}]", item))
    if problems:
        raise ParseError(problems, source)
    return rows


def _csv_rows(data: bytes | str, source: str) -> list[tuple[str, dict[str, Any]]]:
    text = _decode(data, source)
    if not text.strip():
        return []
    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        rows = list(reader)
    except csv.Error as exc:
        raise ParseError(f"line {reader.line_num}: {exc}", source) from None
    header = [h.strip() for h in rows[0]]
    if tuple(header) != CSV_COLUMNS:
        raise ParseError(
            f"line 1: header must be {','.join(CSV_COLUMNS)}, got {','.join(header)}", source
        )
    out = []
    problems = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(CSV_COLUMNS):
            problems.append(f"line {lineno}: expected {len(CSV_COLUMNS)} fields, got {len(row)}")
            continue
        raw: dict[str, Any] = dict(zip(CSV_COLUMNS, (cell.strip() for cell in row)))
        raw["title"] = raw["title"] or None
        out.append((f"line {lineno}", raw))
    if problems:
        raise ParseError(problems, source)
    return out


def parse_portfolio(data: bytes | str, fmt: str = "json", source: str | None = None) -> list[ProjectRecord]:
    """Parse a JSON or CSV portfolio into validated project records.

    Raises :class:`ParseError` for malformed syntax and :class:`ValidationError`
    listing every record problem (including duplicate ids) otherwise.
    """
    fmt = fmt.lower()
    if fmt == "json":
        rows = _json_rows(data, source)
    elif fmt == "csv":
        rows = _csv_rows(data, source)
    else:
        raise DomainError(f"unknown portfolio format {fmt!r} (json or csv)")

    records: list[ProjectRecord] = []
    problems: list[str] = []
    seen: dict[str, str] = {}
    for where, raw in rows:
        record, errs = _build_record(raw, where)
        problems.extend(errs)
        if record is None:
            continue
        if record.id in seen:
            problems.append(f"{where}: duplicate id {record.id!r} (first seen at {seen[record.id]})")
            continue
        seen[record.id] = where
        records.append(record)
    if problems:
        raise ValidationError(problems, source)
    return records


def serialize_portfolio(records: Iterable[ProjectRecord], fmt: str = "json") -> str:
    records = list(records)
    if fmt == "json":
        return json.dumps({"records": [r.to_dict() for r in records]}, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO(newline="")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in records:
            d = r.to_dict()
            d["title"] = d["title"] or ""
            d["cost"] = repr(d["cost"])
            writer.writerow([d[c] for c in CSV_COLUMNS])
        return buf.getvalue()
    raise DomainError(f"unknown portfolio format {fmt!r} (json or csv)")


def guess_format(path: str) -> str:
    return "csv" if str(path).lower().endswith(".csv") else "json"


def port_ids(records: Iterable[ProjectRecord]) -> list[str]:
    return sorted({r.port_id for r in records})


def resolve_port(records: Sequence[ProjectRecord], port_id: str | None) -> str:
    """Pick the port to evaluate; optional only when the portfolio has one port."""
    ports = port_ids(records)
    if port_id is None:
        if len(ports) == 1:
            return ports[0]
        if not ports:
            raise ValidationError("portfolio is empty; pass an explicit port id")
        raise ValidationError(f"portfolio holds several ports ({', '.join(ports)}); choose one")
    if records and port_id not in ports:
        raise UnknownReferenceError(f"port {port_id!r} not found in portfolio (ports: {', '.join(ports)})")
    return port_id


def build_matrix(records: Iterable[ProjectRecord], window: TimeWindow, port_id: str) -> InnovationMatrix:
    """Sum each matching record's cost (M EUR) into its bundle x stage cell.

    A project is charged once, in its start year, at the stage of its declared TRL.
    """
    cells = np.zeros((4, 3))
    for r in records:
        if r.port_id == port_id and r.start_year in window:
            cells[r.bundle.position, r.stage.position] += r.cost_meur
    return InnovationMatrix(cells)


@dataclass
class IngestSummary:
    port_id: str
    records_total: int
    records_for_port: int
    in_window: dict[str, int] = field(default_factory=dict)
    excluded: int = 0
    years: dict[int, int] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "port_id": self.port_id,
            "records_total": self.records_total,
            "records_for_port": self.records_for_port,
            "in_window": dict(self.in_window),
            "excluded_outside_windows": self.excluded,
            "records_per_year": {str(y): n for y, n in sorted(self.years.items())},
        }


def ingest_summary(records: Sequence[ProjectRecord], windows: Sequence[TimeWindow], port_id: str) -> IngestSummary:
    mine = [r for r in records if r.port_id == port_id]
    summary = IngestSummary(port_id, len(records), len(mine))
    summary.years = dict(Counter(r.start_year for r in mine))
    for w in windows:
        summary.in_window[w.label] = sum(1 for r in mine if r.start_year in w)
    summary.excluded = sum(1 for r in mine if not any(r.start_year in w for w in windows))
    return summary


def _string_list(doc: dict[str, Any], key: str, problems: list[str]) -> list[str]:
    value = doc.get(key)
    if not isinstance(value, list):
        problems.append(f'"{key}" must be an array of strings')
        return []
    bad = [v for v in value if not isinstance(v, str)]
    if bad:
        problems.append(f'"{key}" contains non-string entries: {bad!r}')
    return [v for v in value if isinstance(v, str)]


def parse_ledger(data: bytes | str, source: str | None = None) -> StandardsLedger:
    doc = _load_json(data, source)
    if not isinstance(doc, dict):
        raise ParseError('ledger must be a JSON object with "applicable" and "adopted" arrays', source)
    problems: list[str] = []
    applicable = set(_string_list(doc, "applicable", problems))
    adopted = set(_string_list(doc, "adopted", problems))
    extra = adopted - applicable
    if extra:
        problems.append("adopted standards not listed as applicable: " + ", ".join(sorted(extra)))
    if problems:
        raise ValidationError(problems, source)
    return StandardsLedger(frozenset(applicable), frozenset(adopted))


def default_weights() -> tuple[WeightVector, WeightVector]:
    """Uniform a = (2, 2, 2, 2) and w = (sqrt3, sqrt3, sqrt3)."""
    return (
        WeightVector.uniform(WeightKind.BUSINESS_SPECIFICITY),
        WeightVector.uniform(WeightKind.INNOVATION_REWARD),
    )


def parse_weights(data: bytes | str, source: str | None = None) -> tuple[WeightVector, WeightVector]:
    """Load ``{"a_raw": [4 numbers], "w_raw": [3 numbers]}`` and normalize both."""
    doc = _load_json(data, source)
    if not isinstance(doc, dict):
        raise ParseError('weights must be a JSON object with "a_raw" and "w_raw"', source)
    problems: list[str] = []
    out = []
    for key, kind in (("a_raw", WeightKind.BUSINESS_SPECIFICITY), ("w_raw", WeightKind.INNOVATION_REWARD)):
        raw = doc.get(key)
        if not isinstance(raw, list) or any(_as_float(v) is None or isinstance(v, str) for v in raw):
            problems.append(f'"{key}" must be an array of {kind.size} numbers')
            continue
        try:
            out.append(normalize_weights([float(v) for v in raw], kind))
        except DomainError as exc:
            problems.append(f'"{key}": {exc}')
    if problems:
        raise ValidationError(problems, source)
    return out[0], out[1]
