from fractions import Fraction
from itertools import combinations

import networkx as nx
import pytest

from graphs.constructions import complete_graph, cycle_graph, empty_graph, petersen_graph, star_graph
from graphs.formats import (GraphFormatError, dumps_graph, from_edge_list, from_graph6, to_edge_list, to_graph6,
                            to_networkx)
from graphs.graph import (Graph, GraphError, GraphSizeError, MAX_VERTICES, VertexSet, clique_exists, clique_number,
                          complement, disjoint_union, find_cliques, induced, join, power)
from graphs.utils import apportion, ceil_fraction, format_fraction, round_half_up, to_fraction


def test_from_edges_builds_symmetric_rows():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    assert g.num_edges == 3
    assert g.has_edge(1, 0) and g.has_edge(2, 3)
    assert not g.has_edge(0, 3)
    assert g.degrees() == [1, 2, 2, 1]
    assert g.edges() == [(0, 1), (1, 2), (2, 3)]


def test_from_edges_ignores_duplicates():
    g = Graph.from_edges(3, [(0, 1), (1, 0), (0, 1)])
    assert g.num_edges == 1


@pytest.mark.parametrize("edges", [[(0, 0)], [(0, 5)], [(-1, 2)]])
def test_from_edges_rejects_bad_edges(edges):
    with pytest.raises(GraphError):
        Graph.from_edges(3, edges)


def test_asymmetric_rows_rejected():
    with pytest.raises(GraphError):
        Graph(2, (0b10, 0))


def test_size_cap():
    with pytest.raises(GraphSizeError):
        Graph.from_edges(MAX_VERTICES + 1, [])


def test_complement_of_cycle_five_is_cycle_five():
    c5 = cycle_graph(5)
    assert nx.is_isomorphic(to_networkx(complement(c5)), to_networkx(c5))


def test_join_and_union_counts():
    g, h = cycle_graph(5), empty_graph(3)
    j = join(g, h)
    assert j.n == 8
    assert j.num_edges == 5 + 0 + 15
    u = disjoint_union(g, h)
    assert u.n == 8 and u.num_edges == 5


def test_power_of_path():
    p = Graph.from_edges(5, [(i, i + 1) for i in range(4)])
    assert power(p, 1) == p
    assert power(p, 4) == complete_graph(5)
    with pytest.raises(GraphError):
        power(p, 0)


def test_induced_keeps_original_labels():
    g = petersen_graph()
    h = induced(g, [7, 2, 5])
    assert h.n == 3
    assert [h.label_of(v) for v in range(3)] == [2, 5, 7]
    assert h.has_edge(0, 2)  # 2 ~ 7
    assert h.has_edge(1, 2)  # 5 ~ 7
    assert not h.has_edge(0, 1)


def test_induced_rejects_outside_vertices():
    with pytest.raises(GraphError):
        induced(cycle_graph(5), VertexSet.of([0, 9]))


def test_clique_exists_returns_sorted_witness():
    g = join(cycle_graph(5), complete_graph(1))
    found, witness = clique_exists(g, 3)
    assert found
    assert list(witness) == sorted(witness)
    assert all(g.has_edge(u, v) for i, u in enumerate(witness) for v in witness[i + 1:])
    assert clique_exists(g, 4) == (False, None)


def test_find_cliques_counts():
    assert len(find_cliques(complete_graph(6), 3)) == 20
    assert find_cliques(complete_graph(4), 3) == [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
    assert find_cliques(petersen_graph(), 3) == []


@pytest.mark.parametrize("g,omega", [
    (empty_graph(0), 0),
    (empty_graph(3), 1),
    (star_graph(4), 2),
    (cycle_graph(5), 2),
    (complete_graph(7), 7),
])
def test_clique_number(g, omega):
    assert clique_number(g) == omega


def test_clique_number_matches_networkx(random_graph):
    for seed in range(10):
        g = random_graph(9, 0.5, seed)
        expected = max((len(c) for c in nx.find_cliques(to_networkx(g))), default=0)
        assert clique_number(g) == expected


def test_graph6_matches_networkx():
    g = petersen_graph()
    assert to_graph6(g) == nx.to_graph6_bytes(to_networkx(g), header=False).strip()
    assert from_graph6(to_graph6(g)) == g
    assert from_graph6(to_graph6(g).decode("ascii") + "\n") == g


def test_graph6_rejects_garbage():
    with pytest.raises(GraphFormatError):
        from_graph6(b"A")


def test_edge_list_parsing():
    g = from_edge_list("# pentagon\n5\n0 1\n1 2\n2 3\n3 4\n4 0\n")
    assert g == cycle_graph(5)
    assert from_edge_list(to_edge_list(g)) == g
    assert dumps_graph(g, "edgelist").decode("utf-8").splitlines()[0] == "5"


@pytest.mark.parametrize("text", ["", "x\n0 1\n", "3\n0 1 2\n", "3\n0 a\n", "2\n0 5\n"])
def test_edge_list_errors(text):
    with pytest.raises(GraphFormatError):
        from_edge_list(text)


def test_fraction_helpers():
    assert to_fraction("1/8") == Fraction(1, 8)
    assert to_fraction(0.125) == Fraction(1, 8)
    assert to_fraction("0.9415") == Fraction(9415, 10000)
    assert format_fraction(Fraction(10, 2)) == "5"
    assert format_fraction(Fraction(3, 6)) == "1/2"
    assert round_half_up(Fraction(1, 2)) == 1
    assert round_half_up(Fraction(7, 16)) == 0
    assert ceil_fraction(Fraction(7, 2)) == 4
    assert ceil_fraction(Fraction(-7, 2)) == -3


def test_apportion_largest_remainder():
    assert apportion(11, [Fraction(8, 55)] * 5 + [Fraction(3, 11)]) == [2, 2, 2, 1, 1, 3]
    assert apportion(10, [1, 1, 1]) == [4, 3, 3]
    assert sum(apportion(97, [3, 5, 7, 11])) == 97
    with pytest.raises(ValueError):
        apportion(5, [0, 0])


def brute_force_clique(g, size):
    return any(all(g.has_edge(u, v) for u, v in combinations(subset, 2)) for subset in combinations(range(g.n), size))


@pytest.mark.parametrize("seed", range(100))
def test_clique_exists_matches_subset_enumeration(random_graph, seed):
    g = random_graph(4 + seed % 6, 0.3 + 0.1 * (seed % 5), seed)
    for size in (3, 4):
        found, witness = clique_exists(g, size)
        assert found == brute_force_clique(g, size)
        if found:
            assert len(witness) == size
            assert all(g.has_edge(u, v) for u, v in combinations(witness, 2))


@pytest.mark.parametrize("seed", range(50))
def test_join_edge_count_identity(random_graph, seed):
    g = random_graph(1 + seed % 12, 0.4, seed)
    h = random_graph(1 + (seed * 7) % 12, 0.6, seed + 1000)
    j = join(g, h)
    assert j.n == g.n + h.n
    assert j.num_edges == g.num_edges + h.num_edges + g.n * h.n


@pytest.mark.parametrize("seed", range(10))
def test_complement_involution_and_power_monotone(random_graph, seed):
    g = random_graph(10, 0.25, seed)
    assert complement(complement(g)) == g
    assert complement(g).num_edges == 45 - g.num_edges
    assert power(g, 1) == g
    previous = set(g.edges())
    for k in range(2, 6):
        current = set(power(g, k).edges())
        assert previous <= current
        previous = current
