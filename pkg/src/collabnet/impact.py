"""Field-weighted citation impact and country-combination observations.

A paper's impact score is its citation count divided by the mean citations
of its (field, year, doctype) cell, so scores average to 1.0 within every
cell by construction. Multi-country papers are then aggregated into one
observation per (country combination, year) — the unit of analysis for the
mixed-effects regression — with the dependent variable ln(mean score + 0.1).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import PublicationRecord

LOG_OFFSET = 0.1

OBSERVATION_COLUMNS = ("combo_id", "year", "country_count",
                       "publication_count", "mean_fwci", "log_fwci")

CellKey = tuple[str, int, str]  # (field, year, doctype)


@dataclass(frozen=True)
class BaselineCell:
    mean_citations: float
    n_papers: int
    usable: bool


class Baselines:
    """Per-cell mean citation counts; a cell with mean 0 is unusable."""

    def __init__(self, cells: dict[CellKey, BaselineCell]):
        self.cells = cells

    def __len__(self) -> int:
        return len(self.cells)

    def get(self, key: CellKey) -> BaselineCell | None:
        return self.cells.get(key)


def cell_key(record: PublicationRecord) -> CellKey:
    return (record.field, record.year, record.doctype)


def compute_baselines(records: Iterable[PublicationRecord]) -> Baselines:
    """Arithmetic mean citations per (field, year, doctype) cell."""
    sums: dict[CellKey, int] = {}
    counts: dict[CellKey, int] = {}
    for rec in records:
        key = cell_key(rec)
        sums[key] = sums.get(key, 0) + rec.citations
        counts[key] = counts.get(key, 0) + 1
    cells = {}
    for key, n in counts.items():
        mean = sums[key] / n
        cells[key] = BaselineCell(mean_citations=mean, n_papers=n, usable=mean > 0)
    return Baselines(cells)


def fwci(record: PublicationRecord, baselines: Baselines) -> float:
    """Citations relative to the record's cell average; 0 iff uncited."""
    cell = baselines.get(cell_key(record))
    if cell is None:
        raise KeyError(f"no baseline cell for {cell_key(record)}")
    if not cell.usable:
        raise ValueError(f"unusable baseline cell (mean 0) for {cell_key(record)}")
    return record.citations / cell.mean_citations


def attach_fwci(records: Iterable[PublicationRecord], baselines: Baselines,
                ) -> tuple[dict[str, float], list[tuple[str, str]]]:
    """Score every record; return (scores by id, exclusions with reasons)."""
    scores: dict[str, float] = {}
    excluded: list[tuple[str, str]] = []
    for rec in records:
        cell = baselines.get(cell_key(rec))
        if cell is None:
            excluded.append((rec.id, f"no baseline cell for {cell_key(rec)}"))
        elif not cell.usable:
            excluded.append((rec.id, f"unusable baseline cell (mean 0) for {cell_key(rec)}"))
        else:
            scores[rec.id] = rec.citations / cell.mean_citations
    return scores, excluded


@dataclass(frozen=True)
class ComboObservation:
    """Aggregate of all papers sharing one exact country combination and year."""

    combo_id: tuple[str, ...]  # sorted, duplicate-free
    year: int
    country_count: int
    publication_count: int
    mean_fwci: float
    log_fwci: float

    @property
    def combo_key(self) -> str:
        return "-".join(self.combo_id)


def make_observation(combo_id: tuple[str, ...], year: int,
                     fwci_values: Sequence[float]) -> ComboObservation:
    mean = math.fsum(fwci_values) / len(fwci_values)
    return ComboObservation(
        combo_id=combo_id,
        year=year,
        country_count=len(combo_id),
        publication_count=len(fwci_values),
        mean_fwci=mean,
        log_fwci=math.log(mean + LOG_OFFSET),
    )


def build_observations(records: Iterable[PublicationRecord],
                       scores: dict[str, float]) -> list[ComboObservation]:
    """One observation per (combination, year) over scored multi-country records.

    Single-country records and records without a score are skipped. The same
    combination seen in two years yields two observations that share one
    random-effect group (the combination itself).
    """
    groups: dict[tuple[tuple[str, ...], int], list[tuple[str, float]]] = {}
    for rec in records:
        if not rec.is_international() or rec.id not in scores:
            continue
        groups.setdefault((rec.countries, rec.year), []).append((rec.id, scores[rec.id]))
    observations = []
    for (combo, year), members in sorted(groups.items()):
        members.sort()  # deterministic mean regardless of input order
        observations.append(make_observation(combo, year, [s for _, s in members]))
    return observations


def write_observations(observations: Iterable[ComboObservation],
                       path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(OBSERVATION_COLUMNS)
        for ob in observations:
            writer.writerow([ob.combo_key, ob.year, ob.country_count,
                             ob.publication_count, repr(ob.mean_fwci),
                             repr(ob.log_fwci)])


def read_observations(source: str | Path | Iterable[str]) -> list[ComboObservation]:
    if isinstance(source, (str, Path)):
        with open(source, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
    else:
        rows = list(csv.DictReader(source))
    out = []
    for row in rows:
        combo = tuple(row["combo_id"].split("-"))
        out.append(ComboObservation(
            combo_id=combo,
            year=int(row["year"]),
            country_count=int(row["country_count"]),
            publication_count=int(row["publication_count"]),
            mean_fwci=float(row["mean_fwci"]),
            log_fwci=float(row["log_fwci"]),
        ))
    return out
