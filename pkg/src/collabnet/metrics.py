"""Per-snapshot network statistics battery.

All measures run on the binarized undirected graph: an edge either exists or
it does not, and co-publication counts and cosine weights play no role. The
battery covers size (nodes, edges, diameter), cohesion (average degree,
density), brokerage concentration (betweenness centralization), cliquishness
(transitivity and average local clustering), and a discrete power-law fit of
the degree distribution.

Functions accept either a CollabNetwork or a plain adjacency mapping
`{node: set-of-neighbors}`.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np
from scipy.optimize import brentq
from scipy.special import zeta

from .netbuild import CollabNetwork

STATS_COLUMNS = (
    "specialty", "year", "nodes", "edges", "diameter", "avg_degree",
    "density", "betweenness_centralization", "transitivity",
    "avg_local_clustering", "components", "alpha",
)


@dataclass(frozen=True)
class NetworkStats:
    """The statistics bundle for one (specialty, year) snapshot."""

    specialty: str
    year: int
    n_nodes: int
    n_edges: int
    diameter: int
    avg_degree: float
    density: float
    betweenness_centralization: float
    transitivity: float
    avg_local_clustering: float
    n_components: int
    powerlaw_alpha: float | None = None

    def to_json_obj(self) -> dict:
        """Keys mirror the stats CSV columns."""
        return {
            "specialty": self.specialty,
            "year": self.year,
            "nodes": self.n_nodes,
            "edges": self.n_edges,
            "diameter": self.diameter,
            "avg_degree": self.avg_degree,
            "density": self.density,
            "betweenness_centralization": self.betweenness_centralization,
            "transitivity": self.transitivity,
            "avg_local_clustering": self.avg_local_clustering,
            "components": self.n_components,
            "alpha": self.powerlaw_alpha,
        }


class DiameterInfo(NamedTuple):
    steps: int
    component_size: int
    n_components: int


class PowerlawFit(NamedTuple):
    alpha: float
    loglik: float


def _adjacency(net) -> dict[str, set[str]]:
    if isinstance(net, CollabNetwork):
        return net.adjacency()
    return {v: set(nbrs) for v, nbrs in net.items()}


def degree_stats(net) -> tuple[dict[str, int], float, float]:
    """Per-node degree, average degree 2E/N, density 2E/(N(N-1))."""
    adj = _adjacency(net)
    n = len(adj)
    if n < 2:
        raise ValueError("degenerate network: need at least 2 nodes")
    degrees = {v: len(nbrs) for v, nbrs in adj.items()}
    n_edges = sum(degrees.values()) // 2
    return degrees, 2 * n_edges / n, 2 * n_edges / (n * (n - 1))


def connected_components(net) -> list[set[str]]:
    """Components sorted by decreasing size, ties by smallest member."""
    adj = _adjacency(net)
    seen: set[str] = set()
    comps: list[set[str]] = []
    for start in sorted(adj):
        if start in seen:
            continue
        comp = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in comp:
                    comp.add(w)
                    queue.append(w)
        seen |= comp
        comps.append(comp)
    comps.sort(key=lambda c: (-len(c), min(c)))
    return comps


def _bfs_distances(adj: dict[str, set[str]], source: str) -> dict[str, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def diameter(net) -> DiameterInfo:
    """Longest shortest path (in steps) over the largest connected component."""
    adj = _adjacency(net)
    if not any(adj.values()):
        raise ValueError("no paths: network has no edges")
    comps = connected_components(adj)
    largest = comps[0]
    sub = {v: adj[v] & largest for v in largest}
    ecc = 0
    for v in sub:
        dist = _bfs_distances(sub, v)
        ecc = max(ecc, max(dist.values()))
    return DiameterInfo(steps=ecc, component_size=len(largest), n_components=len(comps))


def _brandes_source(adj: dict[str, set[str]], order: list[str], source: str) -> dict[str, float]:
    """Dependency accumulation for one source (Brandes)."""
    sigma = {v: 0 for v in order}
    dist = {v: -1 for v in order}
    preds: dict[str, list[str]] = {v: [] for v in order}
    sigma[source] = 1
    dist[source] = 0
    stack: list[str] = []
    queue = deque([source])
    while queue:
        v = queue.popleft()
        stack.append(v)
        for w in adj[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)
            if dist[w] == dist[v] + 1:
                sigma[w] += sigma[v]
                preds[w].append(v)
    delta = {v: 0.0 for v in order}
    while stack:
        w = stack.pop()
        for v in preds[w]:
            delta[v] += sigma[v] / sigma[w] * (1 + delta[w])
    delta[source] = 0.0
    return delta


def betweenness_centrality(net, threads: int = 1) -> dict[str, float]:
    """Raw betweenness per node, each unordered pair counted once.

    Shortest-path ties are split evenly. Parallelism over source vertices
    uses an ordered reduction, so results are identical for any thread count.
    """
    adj = _adjacency(net)
    order = sorted(adj)
    bc = {v: 0.0 for v in order}
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            contribs = pool.map(lambda s: _brandes_source(adj, order, s), order)
            for delta in contribs:  # map preserves source order
                for v in order:
                    bc[v] += delta[v]
    else:
        for s in order:
            delta = _brandes_source(adj, order, s)
            for v in order:
                bc[v] += delta[v]
    return {v: bc[v] / 2.0 for v in order}


def betweenness_centralization(net, threads: int = 1) -> float:
    """Freeman centralization of betweenness: 1.0 for a star, 0.0 when all
    nodes broker equally (any vertex-transitive graph)."""
    adj = _adjacency(net)
    n = len(adj)
    if n < 3:
        raise ValueError("centralization undefined: need at least 3 nodes")
    bc = betweenness_centrality(adj, threads=threads)
    b_max = max(bc.values())
    denom = (n - 1) ** 2 * (n - 2) / 2.0
    return sum(b_max - b for b in bc.values()) / denom


def triangle_counts(net) -> dict[str, int]:
    """Triangles incident to each node."""
    adj = _adjacency(net)
    return {v: sum(len(adj[v] & adj[w]) for w in adj[v]) // 2 for v in adj}


def clustering(net) -> tuple[float, float]:
    """(transitivity, average local clustering).

    Transitivity is 3*triangles / connected triples. The local average
    includes every node, with degree < 2 contributing zero.
    """
    adj = _adjacency(net)
    if len(adj) < 3:
        raise ValueError("clustering undefined: need at least 3 nodes")
    tri = triangle_counts(adj)
    triples = 0
    local_sum = 0.0
    for v, nbrs in adj.items():
        d = len(nbrs)
        wedges = d * (d - 1) // 2
        triples += wedges
        if wedges:
            local_sum += tri[v] / wedges
    transitivity = (sum(tri.values()) / triples) if triples else 0.0
    return transitivity, local_sum / len(adj)


def _log_zeta_deriv(alpha: float, h: float = 1e-5) -> float:
    return (math.log(zeta(alpha + h, 1)) - math.log(zeta(alpha - h, 1))) / (2 * h)


def powerlaw_fit(degrees: Iterable[int]) -> PowerlawFit:
    """Discrete maximum-likelihood exponent for P(k) ~ k^-alpha, k_min = 1.

    Solves d/d(alpha) of the zeta log-likelihood for the root; requires a
    spread-out positive degree sequence (at least 10 distinct values).
    """
    ks = np.asarray(list(degrees), dtype=np.int64)
    if ks.size == 0 or np.any(ks < 1):
        raise ValueError("degrees must be positive integers")
    distinct = np.unique(ks)
    if distinct.size == 1:
        raise ValueError("no power-law support: all degrees equal")
    if distinct.size < 10:
        raise ValueError(f"no power-law support: only {distinct.size} distinct degrees")
    mean_log = float(np.mean(np.log(ks)))

    def score(alpha: float) -> float:
        return -_log_zeta_deriv(alpha) - mean_log

    lo, hi = 1.0001, 10.0
    while score(hi) > 0:
        hi *= 2
        if hi > 1e6:
            raise ValueError("no power-law support: degree spread too small")
    alpha = float(brentq(score, lo, hi, xtol=1e-10))
    loglik = float(-alpha * np.sum(np.log(ks)) - ks.size * math.log(zeta(alpha, 1)))
    return PowerlawFit(alpha=alpha, loglik=loglik)


def compute_stats(net: CollabNetwork, threads: int = 1,
                  fit_powerlaw: bool = False) -> NetworkStats:
    """Run the full battery on one network snapshot."""
    degrees, avg_degree, density = degree_stats(net)
    diam = diameter(net)
    centralization = betweenness_centralization(net, threads=threads)
    transitivity, avg_local = clustering(net)
    alpha: float | None = None
    if fit_powerlaw:
        try:
            alpha = powerlaw_fit([d for d in degrees.values() if d > 0]).alpha
        except ValueError:
            alpha = None
    return NetworkStats(
        specialty=net.specialty,
        year=net.year,
        n_nodes=net.n_nodes,
        n_edges=net.n_edges,
        diameter=diam.steps,
        avg_degree=avg_degree,
        density=density,
        betweenness_centralization=centralization,
        transitivity=transitivity,
        avg_local_clustering=avg_local,
        n_components=diam.n_components,
        powerlaw_alpha=alpha,
    )


def _fmt(value, fixed_decimals: bool) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.4f}" if fixed_decimals else f"{value:.12g}"
    return str(value)


def stats_row(stats: NetworkStats, fixed_decimals: bool = False) -> list[str]:
    values = [
        stats.specialty, stats.year, stats.n_nodes, stats.n_edges,
        stats.diameter, stats.avg_degree, stats.density,
        stats.betweenness_centralization, stats.transitivity,
        stats.avg_local_clustering, stats.n_components, stats.powerlaw_alpha,
    ]
    return [_fmt(v, fixed_decimals) for v in values]


def write_stats_csv(stats_list: Iterable[NetworkStats], path: str | Path,
                    fixed_decimals: bool = False) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(STATS_COLUMNS)
        for s in stats_list:
            writer.writerow(stats_row(s, fixed_decimals))


def stats_csv_text(stats_list: Iterable[NetworkStats], fixed_decimals: bool = False) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(STATS_COLUMNS)
    for s in stats_list:
        writer.writerow(stats_row(s, fixed_decimals))
    return out.getvalue()


def stats_json_text(stats_list: Iterable[NetworkStats]) -> str:
    """One JSON object per line, keys matching the CSV columns."""
    return "".join(json.dumps(s.to_json_obj(), sort_keys=True) + "\n"
                   for s in stats_list)


def read_stats_csv(source: str | Path | Iterable[str]) -> list[dict]:
    """Read stats rows back as dicts; blank cells become None."""
    if isinstance(source, (str, Path)):
        with open(source, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
    else:
        rows = list(csv.DictReader(source))
    out = []
    for row in rows:
        parsed: dict = {"specialty": row.get("specialty", "")}
        for col in ("year", "nodes", "edges", "diameter", "components"):
            raw = row.get(col)
            parsed[col] = int(raw) if raw not in (None, "") else None
        for col in ("avg_degree", "density", "betweenness_centralization",
                    "transitivity", "avg_local_clustering", "alpha"):
            raw = row.get(col)
            parsed[col] = float(raw) if raw not in (None, "") else None
        out.append(parsed)
    return out


GRID_MEASURES = (
    ("Avg. Degree", "avg_degree"),
    ("Density", "density"),
    ("Betweenness", "betweenness_centralization"),
    ("Clustering", "transitivity"),
    ("Avg. Cluster", "avg_local_clustering"),
)


def format_stats_grid(rows: list[dict]) -> str:
    """Measure-by-year grid per specialty, one block per specialty."""
    years = sorted({r["year"] for r in rows if r.get("year") is not None})
    specialties = sorted({r["specialty"] for r in rows})
    by_key = {(r["specialty"], r["year"]): r for r in rows}
    width = max([len(s) for s in specialties] + [len(m) for m, _ in GRID_MEASURES] + [12])
    header = "".join(f"{y:>10}" for y in years)
    lines = [f"{'Field / Measure':<{width}}{header}"]
    for spec in specialties:
        lines.append(spec)
        for label, col in GRID_MEASURES:
            cells = []
            for y in years:
                row = by_key.get((spec, y))
                val = row.get(col) if row else None
                cells.append(f"{val:>10.2f}" if val is not None else f"{'':>10}")
            lines.append(f"  {label:<{width - 2}}{''.join(cells)}")
    return "\n".join(lines) + "\n"
