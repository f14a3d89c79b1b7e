"""Longitudinal analytics across snapshot years.

Change summaries compare first and last observed year (node change as a raw
count, edge growth as a percentage, diameter as a direction). Convergence
curves express each year's node count as a share of the final-year count,
per specialty plus a pooled mean curve; shares may exceed 1 when a field
shrinks, which is flagged rather than forbidden.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Iterable, Sequence


@dataclass(frozen=True)
class TrendPoint:
    year: int
    nodes: int
    edges: int
    diameter: int | None = None


@dataclass(frozen=True)
class TrendSeries:
    """Per-year size measures for one specialty, years strictly increasing."""

    specialty: str
    points: tuple[TrendPoint, ...]

    def __post_init__(self):
        years = [p.year for p in self.points]
        if sorted(set(years)) != years:
            raise ValueError(f"years must be strictly increasing, got {years}")

    @property
    def years(self) -> tuple[int, ...]:
        return tuple(p.year for p in self.points)

    def node_shares(self) -> list[float]:
        final = self.points[-1].nodes
        return [p.nodes / final for p in self.points]

    def edge_shares(self) -> list[float]:
        final = self.points[-1].edges
        return [p.edges / final for p in self.points]


@dataclass(frozen=True)
class GrowthResult:
    node_change: int
    edge_growth_pct: float       # exact percentage, unrounded
    diameter_trend: str          # "decrease" | "no change" | "increase"

    @property
    def edge_growth_pct_rounded(self) -> int:
        return round_half_up(self.edge_growth_pct)


def round_half_up(value: float) -> int:
    """Round to the nearest integer with ties away from zero (table style)."""
    return int(Decimal(repr(value)).quantize(Decimal("1"), rounding=ROUND_HALF_UP))


def growth(series: TrendSeries) -> GrowthResult:
    """Change between the first and last year of a series."""
    if len(series.points) < 2:
        raise ValueError("growth needs at least two years")
    first, last = series.points[0], series.points[-1]
    if first.edges == 0:
        raise ValueError(f"growth undefined: zero edges in {first.year}")
    node_change = last.nodes - first.nodes
    pct = 100.0 * (last.edges - first.edges) / first.edges
    if first.diameter is None or last.diameter is None:
        trend = "unknown"
    elif last.diameter < first.diameter:
        trend = "decrease"
    elif last.diameter > first.diameter:
        trend = "increase"
    else:
        trend = "no change"
    return GrowthResult(node_change=node_change, edge_growth_pct=pct,
                        diameter_trend=trend)


@dataclass(frozen=True)
class ConvergenceResult:
    years: tuple[int, ...]
    node_shares: dict[str, list[float]]
    edge_shares: dict[str, list[float]]
    pooled_node_share: list[float]      # mean of node shares across specialties
    non_monotone: frozenset[str]        # specialties whose node share ever drops


def convergence(series_list: Sequence[TrendSeries]) -> ConvergenceResult:
    """Final-year-normalized share curves plus the pooled mean curve."""
    if not series_list:
        raise ValueError("no series")
    grids = {s.years for s in series_list}
    if len(grids) > 1:
        raise ValueError(f"mismatched year grids: {sorted(grids)}")
    years = series_list[0].years
    node_shares = {s.specialty: s.node_shares() for s in series_list}
    edge_shares = {s.specialty: s.edge_shares() for s in series_list}
    pooled = [sum(node_shares[s.specialty][i] for s in series_list) / len(series_list)
              for i in range(len(years))]
    flagged = set()
    for spec, shares in node_shares.items():
        if any(b < a for a, b in zip(shares, shares[1:])):
            flagged.add(spec)
    return ConvergenceResult(years=years, node_shares=node_shares,
                             edge_shares=edge_shares, pooled_node_share=pooled,
                             non_monotone=frozenset(flagged))


def series_from_stats(rows: Iterable[dict]) -> list[TrendSeries]:
    """Group stats rows (as read from the stats CSV) into trend series."""
    by_spec: dict[str, list[TrendPoint]] = {}
    for row in rows:
        if row.get("year") is None or row.get("nodes") is None or row.get("edges") is None:
            raise ValueError(f"stats row missing year/nodes/edges: {row}")
        by_spec.setdefault(row["specialty"], []).append(TrendPoint(
            year=row["year"], nodes=row["nodes"], edges=row["edges"],
            diameter=row.get("diameter")))
    out = []
    for spec in sorted(by_spec):
        points = tuple(sorted(by_spec[spec], key=lambda p: p.year))
        out.append(TrendSeries(specialty=spec, points=points))
    return out


TREND_COLUMNS = ("specialty", "year", "nodes", "edges", "diameter",
                 "node_share", "edge_share", "pooled_node_share")


def trends_csv(series_list: Sequence[TrendSeries]) -> str:
    """Plot-ready long-format CSV with shares and the pooled curve."""
    conv = convergence(series_list)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(TREND_COLUMNS)
    for s in series_list:
        for i, p in enumerate(s.points):
            writer.writerow([
                s.specialty, p.year, p.nodes, p.edges,
                p.diameter if p.diameter is not None else "",
                repr(conv.node_shares[s.specialty][i]),
                repr(conv.edge_shares[s.specialty][i]),
                repr(conv.pooled_node_share[i]),
            ])
    return out.getvalue()


def write_trends_csv(series_list: Sequence[TrendSeries], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(trends_csv(series_list))


def change_cells(series: TrendSeries) -> tuple[str, str, str]:
    """(node change, edge growth %, diameter trend) formatted for the table."""
    g = growth(series)
    return (str(g.node_change), f"{g.edge_growth_pct_rounded}%", g.diameter_trend)


def format_change_table(series_list: Sequence[TrendSeries]) -> str:
    """Size-measures table: nodes/edges/diameter rows per specialty with the
    change column comparing first and last year."""
    if not series_list:
        raise ValueError("no series")
    years = series_list[0].years
    name_w = max(len("Net Measure"), max(len(s.specialty) for s in series_list)) + 2
    year_w = 8
    change_w = len("Change (first to last)")
    header = ("Net Measure".ljust(name_w)
              + "".join(str(y).rjust(year_w) for y in years)
              + "  " + "Change (first to last)")
    lines = [header]
    for s in series_list:
        if s.years != years:
            raise ValueError("mismatched year grids")
        nodes_c, edges_c, diam_c = change_cells(s)
        lines.append(s.specialty)
        lines.append("  Nodes".ljust(name_w)
                     + "".join(str(p.nodes).rjust(year_w) for p in s.points)
                     + "  " + nodes_c.rjust(change_w))
        lines.append("  Edges".ljust(name_w)
                     + "".join(str(p.edges).rjust(year_w) for p in s.points)
                     + "  " + edges_c.rjust(change_w))
        lines.append("  Diameter".ljust(name_w)
                     + "".join(str(p.diameter if p.diameter is not None else "-").rjust(year_w)
                               for p in s.points)
                     + "  " + diam_c.rjust(change_w))
    return "\n".join(lines) + "\n"
