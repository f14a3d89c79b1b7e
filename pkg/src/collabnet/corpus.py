"""Publication corpus: ingestion, validation, journal-to-specialty mapping.

Records arrive as newline-delimited JSON objects, one publication per line:

    {"id": "p1", "year": 2013, "journal": "Journal of Virology",
     "field": "Virology", "doctype": "article",
     "countries": ["US", "CN"], "citations": 5}

Ingestion validates each record, normalizes country codes, resolves the
specialty from the journal name, and collects a rejection report for every
line that is dropped. The resulting corpus is immutable and can be persisted
to a canonical byte-stable JSONL file.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator

from .countries import is_known_country, normalize_country

YEAR_MIN = 1900
YEAR_MAX = 2100

DEFAULT_SPECIALTIES = (
    "Astrophysics",
    "Mathematical Logic",
    "Polymer Science",
    "Seismology",
    "Soil Science",
    "Virology",
)

OTHER_SPECIALTY = "other"

_WS = re.compile(r"\s+")


class RecordInvalid(ValueError):
    """A single record failed validation; `reason` goes to the report."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass(frozen=True)
class PublicationRecord:
    """One publication with its country set and citation count."""

    id: str
    year: int
    journal: str
    specialty: str
    field: str
    doctype: str
    countries: tuple[str, ...]  # normalized, deduplicated, sorted
    citations: int

    def is_international(self) -> bool:
        return len(self.countries) >= 2

    def to_json_obj(self) -> dict:
        return {
            "id": self.id,
            "year": self.year,
            "journal": self.journal,
            "specialty": self.specialty,
            "field": self.field,
            "doctype": self.doctype,
            "countries": list(self.countries),
            "citations": self.citations,
        }


def _norm_journal(name: str) -> str:
    return _WS.sub(" ", name.strip()).casefold()


class SpecialtyMap:
    """Journal name -> specialty label, exact match after normalization.

    Journal names must be unique after case/whitespace normalization, and
    every label must belong to the configured specialty universe.
    """

    def __init__(self, entries: dict[str, str], universe: Iterable[str] = DEFAULT_SPECIALTIES):
        self.universe = frozenset(universe)
        self._entries: dict[str, str] = {}
        for journal, label in entries.items():
            key = _norm_journal(journal)
            if key in self._entries and self._entries[key] != label:
                raise ValueError(f"duplicate journal after normalization: {journal!r}")
            if label not in self.universe:
                raise ValueError(
                    f"specialty {label!r} for journal {journal!r} is not in the universe"
                )
            self._entries[key] = label

    def __len__(self) -> int:
        return len(self._entries)

    def resolve(self, journal: str) -> str | None:
        """Specialty label for a journal, or None when unmapped."""
        return self._entries.get(_norm_journal(journal))

    def labels(self) -> list[str]:
        """All valid specialty labels, including the unmapped fallback."""
        return sorted(self.universe | {OTHER_SPECIALTY})

    @classmethod
    def from_csv(cls, source: str | Path | io.TextIOBase,
                 universe: Iterable[str] | None = None) -> "SpecialtyMap":
        """Load a two-column `journal,specialty` CSV (header optional)."""
        if isinstance(source, (str, Path)):
            with open(source, newline="", encoding="utf-8") as fh:
                rows = list(csv.reader(fh))
        else:
            rows = list(csv.reader(source))
        if rows and [c.strip().lower() for c in rows[0][:2]] == ["journal", "specialty"]:
            rows = rows[1:]
        entries = {}
        for row in rows:
            if not row or not "".join(row).strip():
                continue
            if len(row) < 2:
                raise ValueError(f"specialty map row needs two columns: {row!r}")
            entries[row[0]] = row[1].strip()
        if universe is None:
            universe = sorted(set(entries.values()))
        return cls(entries, universe)

    @classmethod
    def bundled(cls) -> "SpecialtyMap":
        """The packaged six-specialty journal list."""
        data = resources.files("collabnet.data").joinpath("specialty_journals.csv")
        with data.open("r", encoding="utf-8") as fh:
            return cls.from_csv(fh, universe=DEFAULT_SPECIALTIES)


def parse_record(obj: dict) -> PublicationRecord:
    """Validate one decoded record object. Raises RecordInvalid."""
    rid = obj.get("id")
    if not isinstance(rid, str) or not rid.strip():
        raise RecordInvalid("missing id")
    year = obj.get("year")
    if isinstance(year, bool) or not isinstance(year, int):
        raise RecordInvalid("invalid year")
    if not (YEAR_MIN <= year <= YEAR_MAX):
        raise RecordInvalid(f"year out of range: {year}")
    raw_countries = obj.get("countries")
    if raw_countries is None or isinstance(raw_countries, (str, bytes)):
        raise RecordInvalid("invalid countries")
    try:
        codes = [normalize_country(str(c)) for c in raw_countries]
    except (TypeError, AttributeError):
        raise RecordInvalid("invalid countries") from None
    if not codes:
        raise RecordInvalid("empty country set")
    for code in codes:
        if not is_known_country(code):
            raise RecordInvalid(f"unknown country code: {code}")
    citations = obj.get("citations")
    if isinstance(citations, bool) or not isinstance(citations, int):
        raise RecordInvalid("invalid citations")
    if citations < 0:
        raise RecordInvalid(f"negative citations: {citations}")
    return PublicationRecord(
        id=rid,
        year=year,
        journal=str(obj.get("journal", "") or ""),
        specialty=str(obj.get("specialty", "") or ""),
        field=str(obj.get("field", "") or ""),
        doctype=str(obj.get("doctype", "") or ""),
        countries=tuple(sorted(set(codes))),
        citations=citations,
    )


@dataclass
class Corpus:
    """Validated records keyed by id, plus the ingestion rejection report."""

    records: dict[str, PublicationRecord] = field(default_factory=dict)
    rejections: list[tuple[str, str]] = field(default_factory=list)
    specialty_labels: frozenset[str] = frozenset(DEFAULT_SPECIALTIES) | {OTHER_SPECIALTY}

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[PublicationRecord]:
        for rid in sorted(self.records):
            yield self.records[rid]

    def save(self, path: str | Path) -> None:
        """Write the canonical JSONL form: sorted by id, compact, LF."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for rec in self:
                fh.write(json.dumps(rec.to_json_obj(), sort_keys=True,
                                    separators=(",", ":")))
                fh.write("\n")

    @classmethod
    def load(cls, path: str | Path,
             specialty_labels: Iterable[str] | None = None) -> "Corpus":
        """Read a previously saved corpus (specialties taken as stored)."""
        records: dict[str, PublicationRecord] = {}
        with open(path, encoding="utf-8") as fh:
            for n, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                    rec = parse_record(obj)
                except (json.JSONDecodeError, RecordInvalid) as exc:
                    raise ValueError(f"{path}:{n}: {exc}") from None
                records[rec.id] = rec
        labels = set(specialty_labels) if specialty_labels is not None else set(DEFAULT_SPECIALTIES)
        labels |= {r.specialty for r in records.values()}
        labels.add(OTHER_SPECIALTY)
        return cls(records=records, rejections=[], specialty_labels=frozenset(labels))


def _iter_lines(source) -> Iterator[str]:
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            yield from fh
    else:
        yield from source


def ingest(source, smap: SpecialtyMap) -> Corpus:
    """Ingest a record stream against a specialty map.

    Every input line lands in exactly one bucket: the corpus, or the
    rejection report. Re-ingesting the same stream yields an identical
    corpus. On a duplicate id the last record wins and the superseded one
    is counted as a rejection.
    """
    records: dict[str, PublicationRecord] = {}
    rejections: list[tuple[str, str]] = []
    for n, line in enumerate(_iter_lines(source), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            if not isinstance(obj, dict):
                raise RecordInvalid("malformed record: not an object")
            rec = parse_record(obj)
        except json.JSONDecodeError as exc:
            rejections.append((f"line:{n}", f"malformed record: {exc.msg}"))
            continue
        except RecordInvalid as exc:
            rid = obj.get("id") if isinstance(obj, dict) else None
            rejections.append((str(rid) if rid else f"line:{n}", exc.reason))
            continue
        specialty = smap.resolve(rec.journal) or OTHER_SPECIALTY
        rec = PublicationRecord(
            id=rec.id, year=rec.year, journal=rec.journal, specialty=specialty,
            field=rec.field, doctype=rec.doctype, countries=rec.countries,
            citations=rec.citations,
        )
        if rec.id in records:
            rejections.append((rec.id, "superseded by later record with same id"))
        records[rec.id] = rec
    labels = frozenset(smap.universe) | {OTHER_SPECIALTY}
    return Corpus(records=records, rejections=rejections, specialty_labels=labels)


def filter_records(corpus: Corpus, specialty: str, year: int) -> list[PublicationRecord]:
    """Records matching one (specialty, year) slice, ordered by id.

    An unknown specialty label is an error; a known label with no matching
    records yields an empty list.
    """
    if specialty not in corpus.specialty_labels:
        valid = ", ".join(sorted(corpus.specialty_labels))
        raise ValueError(f"unknown specialty {specialty!r}; valid labels: {valid}")
    return [r for r in corpus if r.specialty == specialty and r.year == year]


def write_rejections(rejections: Iterable[tuple[str, str]], path: str | Path) -> None:
    """Rejection report as `id,reason` CSV."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "reason"])
        writer.writerows(rejections)
