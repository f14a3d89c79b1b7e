import pytest

from collabnet.longit import (
    ConvergenceResult,
    TrendPoint,
    TrendSeries,
    change_cells,
    convergence,
    format_change_table,
    growth,
    round_half_up,
    series_from_stats,
    trends_csv,
)

YEARS = (1990, 2000, 2008, 2013)

# per-year (nodes, edges, diameter) counts with their published change cells
REFERENCE_COUNTS = {
    "All Fields": ([172, 192, 228, 230], [1926, 3537, 3346, 4230], [3, 3, 3, 3],
                   ("58", "120%", "no change")),
    "Astrophysics": ([50, 73, 81, 87], [337, 745, 936, 1251], [4, 3, 4, 3],
                     ("37", "271%", "decrease")),
    "Mathematical Logic": ([14, 33, 35, 32], [17, 75, 74, 58], [5, 5, 5, 5],
                           ("18", "241%", "no change")),
    "Polymer Science": ([50, 71, 75, 72], [110, 311, 334, 391], [5, 5, 4, 4],
                        ("22", "255%", "decrease")),
    "Seismology": ([53, 80, 93, 101], [166, 440, 466, 619], [5, 4, 4, 3],
                   ("48", "273%", "decrease")),
    "Soil Science": ([40, 80, 92, 100], [66, 247, 373, 429], [5, 5, 4, 4],
                     ("60", "550%", "decrease")),
    "Virology": ([60, 89, 112, 120], [190, 338, 611, 693], [4, 4, 4, 4],
                 ("60", "265%", "no change")),
}


def series(name: str) -> TrendSeries:
    nodes, edges, diams, _ = REFERENCE_COUNTS[name]
    points = tuple(TrendPoint(y, n, e, d)
                   for y, n, e, d in zip(YEARS, nodes, edges, diams))
    return TrendSeries(specialty=name, points=points)


def all_series() -> list[TrendSeries]:
    return [series(name) for name in REFERENCE_COUNTS]


def test_soil_science_edge_growth_is_550_percent():
    g = growth(series("Soil Science"))
    assert g.edge_growth_pct == pytest.approx(550.0, abs=1e-12)
    assert g.edge_growth_pct_rounded == 550


def test_all_fields_change_row():
    g = growth(series("All Fields"))
    assert g.node_change == 58
    assert g.edge_growth_pct == pytest.approx(100 * (4230 - 1926) / 1926)
    assert g.edge_growth_pct_rounded == 120  # 119.6 at full precision


def test_every_reference_change_cell_reproduced():
    for name, (_, _, _, expected) in REFERENCE_COUNTS.items():
        assert change_cells(series(name)) == expected


def test_identical_first_and_last_is_no_change():
    s = TrendSeries("x", (TrendPoint(2008, 10, 20, 4), TrendPoint(2013, 10, 20, 4)))
    g = growth(s)
    assert g.node_change == 0
    assert g.edge_growth_pct == 0.0
    assert g.diameter_trend == "no change"


def test_growth_is_translation_invariant_in_years():
    base = series("Virology")
    shifted = TrendSeries("Virology", tuple(
        TrendPoint(p.year + 7, p.nodes, p.edges, p.diameter) for p in base.points))
    assert growth(base) == growth(shifted)


def test_growth_needs_two_years_and_nonzero_edges():
    with pytest.raises(ValueError, match="two years"):
        growth(TrendSeries("x", (TrendPoint(2013, 5, 5, 1),)))
    with pytest.raises(ValueError, match="zero edges"):
        growth(TrendSeries("x", (TrendPoint(2008, 5, 0, None),
                                 TrendPoint(2013, 6, 9, None))))


def test_years_must_increase():
    with pytest.raises(ValueError, match="strictly increasing"):
        TrendSeries("x", (TrendPoint(2013, 1, 1), TrendPoint(2008, 1, 1)))


def test_round_half_up_ties():
    assert round_half_up(119.5) == 120
    assert round_half_up(119.4999) == 119
    assert round_half_up(264.7) == 265
    assert round_half_up(-0.5) == -1


def test_convergence_shares_direct_division():
    conv = convergence(all_series())
    astro = conv.node_shares["Astrophysics"]
    assert astro == pytest.approx([50 / 87, 73 / 87, 81 / 87, 1.0], abs=1e-12)
    assert [round(x, 3) for x in astro] == [0.575, 0.839, 0.931, 1.0]


def test_final_year_share_is_exactly_one():
    conv = convergence(all_series())
    for shares in conv.node_shares.values():
        assert shares[-1] == 1.0
    for shares in conv.edge_shares.values():
        assert shares[-1] == 1.0
    assert conv.pooled_node_share[-1] == 1.0


def test_shrinking_field_is_flagged_not_rejected():
    conv = convergence(all_series())
    assert "Mathematical Logic" in conv.non_monotone  # 35 -> 32 nodes
    assert "Astrophysics" not in conv.non_monotone
    assert conv.node_shares["Mathematical Logic"][2] > 1.0


def test_pooled_curve_is_mean_of_shares():
    conv = convergence(all_series())
    k = len(REFERENCE_COUNTS)
    for i in range(len(YEARS)):
        manual = sum(conv.node_shares[name][i] for name in REFERENCE_COUNTS) / k
        assert conv.pooled_node_share[i] == pytest.approx(manual, abs=1e-15)


def test_mismatched_year_grids_error():
    short = TrendSeries("x", (TrendPoint(2008, 1, 1), TrendPoint(2013, 2, 2)))
    with pytest.raises(ValueError, match="mismatched year grids"):
        convergence([series("Virology"), short])


def test_series_from_stats_rows():
    rows = [
        {"specialty": "A", "year": 2013, "nodes": 20, "edges": 40, "diameter": 3},
        {"specialty": "A", "year": 2008, "nodes": 10, "edges": 20, "diameter": 4},
        {"specialty": "B", "year": 2008, "nodes": 5, "edges": 6, "diameter": 2},
        {"specialty": "B", "year": 2013, "nodes": 8, "edges": 12, "diameter": 2},
    ]
    built = series_from_stats(rows)
    assert [s.specialty for s in built] == ["A", "B"]
    assert built[0].years == (2008, 2013)
    assert change_cells(built[0]) == ("10", "100%", "decrease")


def test_trends_csv_layout():
    text = trends_csv([series("Soil Science")])
    lines = text.splitlines()
    assert lines[0] == "specialty,year,nodes,edges,diameter,node_share,edge_share,pooled_node_share"
    assert lines[1].startswith("Soil Science,1990,40,66,5,0.4,")
    assert lines[-1].endswith("1.0,1.0,1.0")


def test_change_table_contains_all_cells():
    text = format_change_table(all_series())
    for _, (_, _, _, expected) in REFERENCE_COUNTS.items():
        for cell in expected:
            assert cell in text
    assert "550%" in text
