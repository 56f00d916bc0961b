import math

import networkx as nx
import numpy as np
import pytest

from hiermotif import build, sample
from hiermotif.sampling import bare, full
from hiermotif.structure import (
    boundary_ratio_closed,
    clustering_average,
    clustering_limit_decorated_structural,
    clustering_limit_m1_decorated,
    clustering_limit_m1_decorated_arctan,
    clustering_m1_bare_closed,
    clustering_m1_decorated_closed,
    clustering_m1_decorated_structural,
    clustering_m5_bare_closed,
    clustering_m5_decorated_structural,
    diameter,
    local_clustering,
    mean_degree,
    per_level_clustering,
    small_world_bound,
    structure_report,
)


def to_nx(g, real=None):
    G = nx.Graph()
    G.add_nodes_from(range(g.node_count))
    G.add_edges_from(g.edges(None if real is None else real.active).tolist())
    return G


@pytest.mark.parametrize("motif, k, p", [("m1", 4, 0.5), ("m2", 3, 0.3), ("m4", 3, 0.8), ("m5", 3, 1.0)])
def test_clustering_and_diameter_match_networkx(motif, k, p):
    g = build(motif, k)
    real = sample(g, p, 3)
    G = to_nx(g, real)
    assert clustering_average(g, real) == pytest.approx(nx.average_clustering(G), abs=1e-12)
    assert diameter(g, real) == nx.diameter(G)
    deg, links, q = local_clustering(g, real)
    assert deg.tolist() == [d for _, d in sorted(G.degree())]
    tri = nx.triangles(G)
    assert links.tolist() == [tri[i] for i in range(g.node_count)]


def test_bare_closed_forms():
    for k in range(2, 8):
        assert clustering_average(build("m1", k)) == pytest.approx(clustering_m1_bare_closed(k), abs=1e-12)
    for k in range(2, 6):
        assert clustering_average(build("m5", k)) == pytest.approx(clustering_m5_bare_closed(k), abs=1e-12)


def test_bare_limits():
    assert abs(clustering_average(build("m1", 9)) - 4 / 9) < 2e-3
    assert abs(clustering_average(build("m5", 7)) - 0.5) < 5e-3


def test_decorated_per_level_counts():
    # internal level l: n = 4l, N = 6l - 2; external: n = 2k, N = 3k - 2
    k = 5
    g = build("m1", k)
    deg, links, _ = local_clustering(g, full(g))
    for l in range(1, k):
        sel = g.level_class == l
        assert set(deg[sel].tolist()) == {4 * l}
        assert set(links[sel].tolist()) == {6 * l - 2}
    ext = g.external_index > 0
    assert set(deg[ext].tolist()) == {2 * k} and set(links[ext].tolist()) == {3 * k - 2}


def test_decorated_m5_per_level_counts():
    k = 4
    g = build("m5", k)
    deg, links, _ = local_clustering(g, full(g))
    for l in range(1, k):
        sel = g.level_class == l
        assert set(deg[sel].tolist()) == {6 * l}
        assert set(links[sel].tolist()) == {12 * l - 3}
    ext = g.external_index > 0
    assert set(deg[ext].tolist()) == {3 * k} and set(links[ext].tolist()) == {6 * k - 3}


@pytest.mark.parametrize("k", range(1, 7))
def test_decorated_structural_forms(k):
    g = build("m1", k)
    assert clustering_average(g, full(g)) == pytest.approx(clustering_m1_decorated_structural(k), abs=1e-12)
    if k <= 5:
        g5 = build("m5", k)
        assert clustering_average(g5, full(g5)) == pytest.approx(
            clustering_m5_decorated_structural(k), abs=1e-12
        )


def test_decorated_m1_closed_form_differs_from_counts():
    # the per-level N = 4l form undercounts cross-copy links from level 2 up
    g = build("m1", 2)
    assert clustering_average(g, full(g)) == pytest.approx(2 / 3, abs=1e-12)
    assert clustering_m1_decorated_closed(2) == pytest.approx(7 / 12, abs=1e-12)


def test_decorated_series_limits():
    assert abs(clustering_limit_m1_decorated(30) - 0.5259) < 1e-3
    assert clustering_limit_m1_decorated(3) == pytest.approx(0.521404, abs=1e-6)
    # the arctan/log expression is the series with its sign flipped
    assert clustering_limit_m1_decorated_arctan() == pytest.approx(-clustering_limit_m1_decorated(200), abs=1e-12)
    assert clustering_limit_decorated_structural("m1") == pytest.approx(clustering_m1_decorated_structural(60), abs=1e-12)
    assert clustering_limit_decorated_structural("m5") == pytest.approx(clustering_m5_decorated_structural(40), abs=1e-12)
    with pytest.raises(ValueError):
        clustering_limit_m1_decorated(0)


@pytest.mark.parametrize("motif", ["m1", "m2", "m3", "m4", "m5"])
def test_bare_diameters(motif):
    for k in range(1, 6):
        want = 2 ** (k - 1) if motif in ("m1", "m5") else 2**k
        assert diameter(build(motif, k)) == want


def test_decorated_m1_diameters():
    got = [diameter(build("m1", k), full(build("m1", k))) for k in range(1, 7)]
    assert got == [1, 2, 3, 4, 6, 7]
    assert all(d <= 2 * (k - 1) for k, d in zip(range(2, 7), got[1:]))


def test_small_world_bound():
    g = build("m1", 6)
    assert diameter(g, full(g)) <= small_world_bound(g, full(g))
    assert diameter(g) > small_world_bound(g, bare(g))
    assert mean_degree(g) == pytest.approx(2 * 729 / 366)


def test_boundary_ratio():
    assert boundary_ratio_closed("m1", 10) == pytest.approx(128 / 59052, rel=1e-15)
    assert boundary_ratio_closed("m3", 2) == pytest.approx((2 * 9 + 3 * 4) / 10)
    seq = [boundary_ratio_closed("m5", k) for k in range(3, 12)]
    assert all(a > b for a, b in zip(seq, seq[1:]))


def test_report():
    g = build("m2", 3)
    rep = structure_report(g, sample(g, 0.5, 42))
    d = rep.to_dict()
    assert d["motif"] == "M2" and d["k"] == 3 and set(d["per_level_clustering"]) == {"1", "2", "3"}
    assert rep.per_level_clustering == per_level_clustering(g, sample(g, 0.5, 42))
    assert not math.isnan(rep.clustering_avg)


def test_clustering_zero_for_low_degree():
    g = build("m2", 1)
    _, _, q = local_clustering(g)
    assert q.tolist() == pytest.approx([1.0, 1.0, 1 / 3, 0.0])


def test_series_partial_sums():
    assert clustering_limit_m1_decorated(1) == pytest.approx(4 / 9, rel=1e-15)
    assert clustering_limit_m1_decorated(3) == pytest.approx(4 / 9 + 4 / 63 + 4 / 297, rel=1e-15)
    assert abs(clustering_limit_m1_decorated(30) - clustering_limit_m1_decorated(60)) < 1e-14


def test_bare_m1_identity_up_to_nine():
    for k in (8, 9):
        assert clustering_average(build("m1", k)) == pytest.approx(clustering_m1_bare_closed(k), abs=1e-12)


def test_boundary_ratio_small_k():
    assert boundary_ratio_closed("m5", 1) == pytest.approx(4.5)


def test_small_world_dichotomy_range():
    for k in range(1, 9):
        g = build("m1", k)
        assert diameter(g, full(g)) <= small_world_bound(g, full(g))
    for k in (6, 7, 8):
        g = build("m1", k)
        assert diameter(g) > small_world_bound(g, bare(g))
