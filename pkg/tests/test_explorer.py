import itertools
import random
from fractions import Fraction

import networkx as nx
import pytest

from pclab.curves import random_curve
from pclab.errors import DisconnectedGraph
from pclab.explorer import (all_distances, bottleneck_report, build_orbit_ball, estimate_delta,
                            graph_from_edges, midpoint_deviation, orbit_growth, svg_histogram)
from pclab.mcg import MappingClass, thurston_veech
from pclab.predicates import EdgeRule, PRINCIPAL4

from oracles import four_point_defect_brute, widest_path_value
from conftest import S12_OCTAGON, S12_PRINCIPAL_4, pair


def path_graph(n):
    return graph_from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return graph_from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def brute_deviation(G, D, x, y, m):
    return max(min(D[m][v] for v in p) for p in nx.all_simple_paths(G, x, y))


def test_path_graph_is_a_tree():
    assert estimate_delta(path_graph(9))["delta_hat"] == "0"
    rep = bottleneck_report(path_graph(9))
    assert rep["max_deviation"] == 0


def test_four_cycle():
    g = cycle(4)
    assert Fraction(estimate_delta(g)["delta_hat"]) == four_point_defect_brute(all_distances(g), range(4)) == 1


@pytest.mark.parametrize("half", [2, 3, 4, 5, 6])
def test_even_cycle_midpoint_deviation(half):
    g = cycle(2 * half)
    assert midpoint_deviation(g, 0, half)[0] == half // 2


def test_disconnected_rejected():
    with pytest.raises(DisconnectedGraph):
        estimate_delta(graph_from_edges(4, [(0, 1), (2, 3)]))


def random_graphs(count, seed, lo=4, hi=14, p=(0.2, 0.6)):
    rng = random.Random(seed)
    for k in range(count):
        n = rng.randint(lo, hi)
        G = nx.gnp_random_graph(n, rng.uniform(*p), seed=k)
        if nx.is_connected(G):
            yield G


def test_delta_matches_brute_force():
    for G in random_graphs(80, 1):
        g = graph_from_edges(G.number_of_nodes(), G.edges())
        D = all_distances(g)
        assert Fraction(estimate_delta(g, 10 ** 6)["delta_hat"]) == four_point_defect_brute(D, range(len(D)))


def test_deviation_matches_path_enumeration():
    for G in random_graphs(40, 2, hi=9, p=(0.25, 0.45)):
        g = graph_from_edges(G.number_of_nodes(), G.edges())
        D = all_distances(g)
        for x, y in itertools.combinations(range(len(D)), 2):
            if D[x][y] >= 2:
                dev, path, m = midpoint_deviation(g, x, y, D)
                assert len(path) == D[x][y] + 1
                assert dev == brute_deviation(G, D, x, y, m)


def test_deviation_matches_widest_path():
    for G in random_graphs(30, 3, lo=20, hi=50, p=(0.05, 0.2)):
        g = graph_from_edges(G.number_of_nodes(), G.edges())
        D = all_distances(g)
        adj = {u: list(G.adj[u]) for u in G}
        for x, y in itertools.combinations(range(len(D)), 2):
            if D[x][y] >= 2 and (x + y) % 7 == 0:
                dev, path, m = midpoint_deviation(g, x, y, D)
                assert dev == widest_path_value(adj, D[m], x, y)


def test_orbit_ball_counts_and_determinism():
    base = random_curve((1, 2), 11, 2)
    gens = [MappingClass([(random_curve((1, 2), s, 2), 1)]) for s in (1, 2)]
    assert len(build_orbit_ball(base, gens, 0)) == 1
    g1 = build_orbit_ball(base, gens, 1)
    assert len(g1) <= 2 * len(gens) + 1
    assert g1.digest() == build_orbit_ball(base, gens, 1).digest()
    for u in range(len(g1)):
        for v in g1.adj[u]:
            assert u in g1.adj[v]


def test_window_distances_shrink_as_window_grows():
    base = random_curve((1, 2), 11, 2)
    gens = [MappingClass([(random_curve((1, 2), s, 2), 1)]) for s in (1, 2)]
    small = build_orbit_ball(base, gens, 1, EdgeRule.parse("cg"))
    big = build_orbit_ball(base, gens, 2, EdgeRule.parse("cg"))
    index = {c.weights: i for i, c in enumerate(big.vertices)}
    Ds = [d for d in _dists(small)]
    Db = [d for d in _dists(big)]
    for u in range(len(small)):
        for v in range(len(small)):
            if v in Ds[u]:
                assert Db[index[small.vertices[u].weights]][index[small.vertices[v].weights]] <= Ds[u][v]


def _dists(g):
    from pclab.explorer import bfs
    return [bfs(g, u) for u in range(len(g))]


def test_octagon_orbit_is_witnessed_bounded():
    a, b = pair(S12_OCTAGON)
    rep = orbit_growth(thurston_veech(a, b).phi, a, 20)
    assert rep["verdict"] == "bounded" and rep["diameter_bound"] == 1
    assert all(c["verified"] for c in rep["certificates"]) and len(rep["certificates"]) == 21
    assert not rep["carrier"]["maximal"] and rep["carrier"]["recurrent"]


def test_principal_orbit_has_no_certificate():
    a, b = pair(S12_PRINCIPAL_4)
    rep = orbit_growth(thurston_veech(a, b).phi, a, 6, budget=4, chain_weight_cap=0)
    assert rep["verdict"] == "growth-compatible"
    xs = [int(x) for x in rep["intersections"]]
    assert all(y > 10 * x for x, y in zip(xs[1:], xs[2:]))


def test_identity_orbit():
    a = random_curve((1, 2), 1, 2)
    rep = orbit_growth(MappingClass(), a, 3)
    assert rep["diameter_bound"] == 0


def test_svg_histogram():
    svg = svg_histogram({"0": 3, "1": 1}, "x")
    assert svg.startswith("<svg") and svg.count("<rect") == 2


def test_base_component():
    from pclab.explorer import base_component
    g = graph_from_edges(5, [(0, 1), (1, 2), (3, 4)])
    h = base_component(g)
    assert len(h) == 3 and estimate_delta(h)["delta_hat"] == "0"
