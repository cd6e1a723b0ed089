import itertools
import random

import pytest

from orientramsey import (Graph, OrientedGraph, TooLargeError, arrow,
                          complete_graph, cycle_graph, directed_path,
                          in_out_star, nonisomorphic_graphs, path_graph,
                          transitive_tournament)
from orientramsey.witness import (Coloring, chi_over_log_check,
                                  chromatic_number, ghrv_orientation, k_core,
                                  star_free_extension)

from conftest import (brute_contains, longest_directed_path_vertices,
                      petersen, random_graph)


def brute_k_colorable(g, k):
    for assignment in itertools.product(range(k), repeat=g.n):
        if all(assignment[u] != assignment[v] for u, v in g.edges()):
            return True
    return False


def test_chromatic_basics():
    for t in range(1, 7):
        assert chromatic_number(complete_graph(t)).value == t
    assert chromatic_number(cycle_graph(5)).value == 3
    assert chromatic_number(Graph.empty(4)).value == 1
    assert chromatic_number(Graph.empty(0)).value == 0
    assert chromatic_number(path_graph(6)).value == 2


def test_chromatic_petersen():
    res = chromatic_number(petersen())
    assert res.value == 3 and res.exact
    assert not brute_k_colorable(petersen(), 2)
    assert brute_k_colorable(petersen(), 3)


def test_chromatic_witness_is_proper_and_tight():
    rng = random.Random(12)
    for _ in range(25):
        g = random_graph(rng, rng.randint(1, 8), 14)
        res = chromatic_number(g)
        assert res.exact
        assert res.coloring.is_proper(g)
        assert len(set(res.coloring.colors)) == res.value == res.coloring.k
        # optimality against brute force
        if res.value > 1:
            assert not brute_k_colorable(g, res.value - 1)


def test_chromatic_greedy_mode_is_labeled():
    g = random_graph(random.Random(2), 40, 100)
    res = chromatic_number(g, exact=False)
    assert not res.exact
    assert res.coloring.is_proper(g)
    with pytest.raises(TooLargeError):
        chromatic_number(g)


def test_ghrv_triangle_gives_transitive_tournament():
    o = ghrv_orientation(complete_graph(3), Coloring((1, 2, 3), 3))
    assert o == transitive_tournament(3)


def test_ghrv_rejects_improper():
    with pytest.raises(ValueError):
        ghrv_orientation(complete_graph(2), Coloring((1, 1), 1))
    with pytest.raises(ValueError):
        ghrv_orientation(complete_graph(3), Coloring((1, 2), 2))


def test_ghrv_bipartite_has_no_directed_p3():
    rng = random.Random(6)
    for _ in range(15):
        left = rng.randint(1, 4)
        right = rng.randint(1, 4)
        edges = [(u, left + v) for u in range(left) for v in range(right)
                 if rng.random() < 0.6]
        g = Graph.from_edges(left + right, edges)
        colors = tuple(0 if v < left else 1 for v in range(left + right))
        o = ghrv_orientation(g, Coloring(colors, 2))
        assert not brute_contains(o, directed_path(3))


def test_ghrv_on_c5_with_optimal_coloring():
    g = cycle_graph(5)
    res = chromatic_number(g)
    o = ghrv_orientation(g, res.coloring)
    assert not brute_contains(o, directed_path(4))
    assert brute_contains(o, directed_path(3))


def test_ghrv_longest_path_matches_chromatic_number():
    rng = random.Random(33)
    for _ in range(20):
        g = random_graph(rng, rng.randint(1, 7), 12)
        res = chromatic_number(g)
        o = ghrv_orientation(g, res.coloring)
        assert o.is_acyclic()
        assert longest_directed_path_vertices(o) == res.value


def test_k_core_examples():
    dec = k_core(complete_graph(5), 4)
    assert dec.core == frozenset(range(5)) and dec.order == ()
    tree = path_graph(7)
    assert not k_core(tree, 2).core
    g = Graph.from_edges(7, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 6)])
    dec = k_core(g, 2)
    assert dec.core == frozenset(range(6))
    assert dec.order == (6,)


def test_k_core_elimination_order_is_valid():
    rng = random.Random(21)
    for _ in range(20):
        g = random_graph(rng, rng.randint(1, 9), 14)
        k = rng.randint(0, 4)
        dec = k_core(g, k)
        alive = set(range(g.n))
        for v in dec.order:
            deg = sum(1 for w in range(g.n) if w in alive and g.has_edge(v, w))
            assert deg < k
            alive.discard(v)
        assert alive == set(dec.core)
        core_graph = dec.core_graph(g)
        for v in dec.core:
            assert core_graph.degree(v) >= k


def test_star_free_extension_on_trees():
    rng = random.Random(10)
    for _ in range(15):
        n = rng.randint(2, 10)
        pairs = [(rng.randrange(i), i) for i in range(1, n)]   # random tree
        g = Graph.from_edges(n, pairs)
        assert not k_core(g, 2).core
        ext = star_free_extension(g, OrientedGraph.from_arcs(n, ()), 1, 1)
        assert ext.underlying() == g
        assert not brute_contains(ext, directed_path(3))


def test_star_free_extension_keeps_core_arcs():
    g = Graph.from_edges(6, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 5)])
    # 2-core is the triangle; the cyclic orientation has all out-degrees 1,
    # so it avoids the two-leaf out-star
    core_orientation = OrientedGraph.from_arcs(6, [(0, 1), (1, 2), (2, 0)])
    ext = star_free_extension(g, core_orientation, 0, 2)
    assert set(core_orientation.arcs) <= set(ext.arcs)
    assert ext.underlying() == g
    assert not brute_contains(ext, in_out_star(0, 2))


def test_star_free_extension_rejects_bad_core_orientation():
    k4 = complete_graph(4)
    # every orientation of K4 contains the 1-in-1-out star; the error path
    # must fire no matter which orientation is offered
    assert arrow(k4, in_out_star(1, 1)).verdict
    some_orientation = OrientedGraph.from_arcs(4, k4.edges())
    with pytest.raises(ValueError):
        star_free_extension(k4, some_orientation, 1, 1)
    # wrong support: orienting a non-core edge
    tree = path_graph(3)
    with pytest.raises(ValueError):
        star_free_extension(tree, OrientedGraph.from_arcs(3, [(0, 1)]), 1, 1)


def test_empty_core_means_no_arrow():
    rng = random.Random(14)
    stars = [(1, 1), (0, 2), (2, 1)]
    for _ in range(15):
        g = random_graph(rng, rng.randint(1, 7), 8)
        for a, b in stars:
            if not k_core(g, a + b).core:
                s = in_out_star(a, b)
                ext = star_free_extension(g, OrientedGraph.from_arcs(g.n, ()), a, b)
                assert not brute_contains(ext, s)
                assert not arrow(g, s).verdict


def test_chi_over_log_examples():
    assert chi_over_log_check(complete_graph(4), directed_path(2))
    assert not chi_over_log_check(cycle_graph(5), directed_path(5))
    with pytest.raises(ValueError):
        chi_over_log_check(complete_graph(4),
                           OrientedGraph.from_arcs(3, [(0, 1), (1, 2), (2, 0)]))
    with pytest.raises(ValueError):
        chi_over_log_check(Graph.empty(1), directed_path(2))


def test_chi_over_log_is_sound():
    # whenever the sufficient condition fires, the arrow relation holds
    trees = [directed_path(2), directed_path(3), in_out_star(2, 0),
             in_out_star(0, 2), in_out_star(1, 1)]
    fired = 0
    for n in range(2, 8):
        for g in nonisomorphic_graphs(n):
            chi = chromatic_number(g).value
            for t in trees:
                if chi_over_log_check(g, t, chi=chi):
                    fired += 1
                    assert arrow(g, t).verdict
    assert fired > 0
