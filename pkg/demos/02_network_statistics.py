"""The per-snapshot statistics battery.

Size (nodes, edges, diameter), cohesion (average degree, density), brokerage
concentration (betweenness centralization), and cliquishness (transitivity
and average local clustering), all on the binarized undirected graph. Two
reference shapes bracket the measures: a star is maximally centralized, a
complete graph maximally dense.
"""

from collabnet import corpus, metrics, netbuild, syngen

# Canonical shapes first: the measures hit their defining values.
star = {0: set(range(1, 8)), **{v: {0} for v in range(1, 8)}}
print("star of 8:    centralization",
      metrics.betweenness_centralization(star))
k5 = {v: set(range(5)) - {v} for v in range(5)}
_, avg, density = metrics.degree_stats(k5)
print("complete K5:  avg degree", avg, " density", density,
      " diameter", metrics.diameter(k5).steps)

# Now real snapshots from a generated corpus.
cfg = syngen.GenConfig.default(seed=7, n_papers=2500)
records, _ = syngen.generate(cfg)
corp = corpus.ingest(syngen.records_jsonl(records).splitlines(),
                     syngen.specialty_map_for(cfg))

rows = []
for specialty in ("Astrophysics", "Virology", "Mathematical Logic"):
    for year in (2008, 2013):
        slice_ = corpus.filter_records(corp, specialty, year)
        net = netbuild.build_network(slice_)
        rows.append(metrics.compute_stats(net))

print("\n" + metrics.stats_csv_text(rows, fixed_decimals=True))

# The same rows rearranged into the measure-by-year grid layout.
parsed = metrics.read_stats_csv(metrics.stats_csv_text(rows).splitlines())
print(metrics.format_stats_grid(parsed))
