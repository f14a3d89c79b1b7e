"""Growth summaries and convergence curves across snapshot years.

The change summary compares first and last observed year: node change as a
raw count, edge growth as a percentage (half-up rounding for table display),
diameter as a direction. Convergence expresses each year's node count as a
share of the final-year count; a shrinking field pushes an earlier share
above 1 and gets flagged rather than rejected.
"""

from collabnet import longit

YEARS = (1990, 2000, 2008, 2013)

# Per-year (nodes, edges, diameter) size measures for four fields.
SIZES = {
    "Alpha": ([50, 73, 81, 87], [337, 745, 936, 1251], [4, 3, 4, 3]),
    "Beta": ([40, 80, 92, 100], [66, 247, 373, 429], [5, 5, 4, 4]),
    "Gamma": ([14, 33, 35, 32], [17, 75, 74, 58], [5, 5, 5, 5]),
    "Delta": ([60, 89, 112, 120], [190, 338, 611, 693], [4, 4, 4, 4]),
}

series = [
    longit.TrendSeries(name, tuple(
        longit.TrendPoint(y, n, e, d)
        for y, n, e, d in zip(YEARS, nodes, edges, diams)))
    for name, (nodes, edges, diams) in SIZES.items()
]

for s in series:
    g = longit.growth(s)
    print(f"{s.specialty:<6} +{g.node_change} nations, "
          f"edges {g.edge_growth_pct_rounded:+d}%, diameter {g.diameter_trend}")

print()
print(longit.format_change_table(series))

conv = longit.convergence(series)
print("node shares (final year = 1):")
for name, shares in conv.node_shares.items():
    cells = "  ".join(f"{x:.3f}" for x in shares)
    flag = "  <- non-monotone" if name in conv.non_monotone else ""
    print(f"  {name:<6} {cells}{flag}")
print("  pooled " + "  ".join(f"{x:.3f}" for x in conv.pooled_node_share))

# The long-format CSV is the plot-ready artifact.
print("\ntrends CSV head:")
print("\n".join(longit.trends_csv(series).splitlines()[:3]))
