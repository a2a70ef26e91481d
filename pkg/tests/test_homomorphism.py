from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from graphs.constructions import (blowup, complete_graph, complete_multipartite, cycle_graph, make_F, make_wheel,
                                  petersen_graph)
from solvers.caps import CapExceededError, CapGuard, SolverError
from solvers.homomorphism import (HomomorphismMap, check_degree_hypothesis, chromatic_at_most, chromatic_number,
                                  collapse_homomorphism, collapse_map, degree_threshold, find_homomorphism,
                                  is_surjective, minimal_wheel_type)
from solvers.partition import max_kcut_exact


def test_odd_cycle_maps_to_pentagon_not_to_edge():
    assert find_homomorphism(cycle_graph(7), cycle_graph(5)) is not None
    assert find_homomorphism(cycle_graph(5), complete_graph(2)) is None
    hom = find_homomorphism(cycle_graph(5), cycle_graph(5))
    assert hom.is_edge_preserving(cycle_graph(5), cycle_graph(5))
    assert is_surjective(hom)


@pytest.mark.parametrize("g,chi", [
    (complete_graph(1), 1),
    (cycle_graph(6), 2),
    (cycle_graph(5), 3),
    (petersen_graph(), 3),
    (complete_graph(5), 5),
    (make_wheel(2), 4),
])
def test_chromatic_number(g, chi):
    assert chromatic_number(g) == chi


def test_homomorphism_cap():
    guard = CapGuard(homomorphism_caps={12: 6})
    with pytest.raises(CapExceededError):
        find_homomorphism(cycle_graph(7), cycle_graph(5), guard)
    with pytest.raises(CapExceededError):
        find_homomorphism(cycle_graph(5), complete_graph(17), guard)


@pytest.mark.parametrize("d", range(2, 7))
def test_collapse_map_for_every_missing_vertex(d):
    source, target = make_wheel(d), make_wheel(d - 1)
    for missing in range(3 * d):
        out = collapse_map(d, missing)
        assert set(out) == set(range(3 * d)) - {missing}
        assert all(target.has_edge(out[u], out[v]) for u, v in source.edges() if u in out and v in out)


def test_collapse_rejects_bad_input():
    with pytest.raises(SolverError):
        collapse_map(1, 0)
    with pytest.raises(SolverError):
        collapse_map(2, 6)


def test_collapse_of_pentagon_into_wheel():
    phi = HomomorphismMap(5, 6, (0, 1, 2, 3, 4))
    composed = collapse_homomorphism(cycle_graph(5), phi, 2)
    assert composed.mapping == (0, 1, 0, 1, 2)
    assert composed.is_edge_preserving(cycle_graph(5), make_wheel(1))


def test_collapse_needs_a_missing_vertex():
    g = make_wheel(2)
    identity = HomomorphismMap(6, 6, tuple(range(6)))
    with pytest.raises(SolverError):
        collapse_homomorphism(g, identity, 2)
    with pytest.raises(SolverError):
        collapse_homomorphism(cycle_graph(5), HomomorphismMap(5, 6, (0, 0, 1, 2, 3)), 2)


def test_minimal_wheel_type():
    assert minimal_wheel_type(complete_graph(3))[0] == 1
    assert minimal_wheel_type(make_wheel(2))[0] == 2
    assert minimal_wheel_type(make_F(3))[0] == 1
    assert minimal_wheel_type(make_wheel(3), d_max=2) is None
    d, hom = minimal_wheel_type(make_wheel(3))
    assert d == 3
    assert hom.is_edge_preserving(make_wheel(3), make_wheel(3))


def test_degree_threshold_values():
    assert degree_threshold(9, 3, 2) == Fraction(45, 8)
    assert degree_threshold(9, 3, 1) == 6
    assert degree_threshold(10, 2, 1) == 5


def test_hypothesis_on_complete_tripartite():
    g = complete_multipartite([3, 3, 3])
    report = check_degree_hypothesis(g, 3, 2)
    assert report.hypothesis_met and report.krfree
    assert report.map_found
    assert not report.bug
    assert report.to_dict()["threshold"] == "45/8"

    equal = check_degree_hypothesis(g, 3, 1)
    assert not equal.hypothesis_met
    assert equal.map_found is None


@pytest.mark.parametrize("r,d", [(2, 6), (2, 7), (3, 7), (4, 9)])
def test_hypothesis_past_the_homomorphism_cap_is_refused_not_raised(r, d):
    g = complete_multipartite([3] * r)
    events = []
    report = check_degree_hypothesis(g, r, d, on_event=events.append)
    assert report.hypothesis_met and report.krfree
    assert report.map_found is None
    assert report.refused is not None
    assert not report.bug
    assert report.to_dict()["refused"] == report.refused
    assert events[-1]["type"] == "refused"


def test_hypothesis_arguments_checked():
    with pytest.raises(SolverError):
        check_degree_hypothesis(cycle_graph(5), 3, 0)
    with pytest.raises(SolverError):
        check_degree_hypothesis(cycle_graph(5), 1, 2)


def test_map_dict_round_trip():
    hom = HomomorphismMap(3, 4, (0, 1, 3))
    assert HomomorphismMap.from_dict(hom.to_dict()) == hom
    assert hom.missing() == [2]
    assert hom.image() == [0, 1, 3]


def brute_force_homomorphism(g, h):
    edges = g.edges()
    return any(all(h.has_edge(phi[u], phi[v]) for u, v in edges) for phi in product(range(h.n), repeat=g.n))


@pytest.mark.parametrize("seed", range(50))
def test_search_matches_exhaustive_enumeration(random_graph, seed):
    g = random_graph(2 + seed % 5, 0.5, seed)
    h = random_graph(2 + (seed // 5) % 4, 0.6, seed + 500)
    hom = find_homomorphism(g, h)
    assert (hom is not None) == brute_force_homomorphism(g, h)
    if hom is not None:
        assert hom.is_edge_preserving(g, h)


@pytest.mark.parametrize("seed", range(100))
def test_full_cut_iff_colourable(random_graph, seed):
    g = random_graph(3 + seed % 6, 0.3 + 0.1 * (seed % 5), seed)
    chi = chromatic_number(g)
    for k in (2, 3):
        assert (max_kcut_exact(g, k).value == g.num_edges) == (chi <= k)


@pytest.mark.parametrize("seed", range(20))
def test_chromatic_at_most_is_monotone(random_graph, seed):
    g = random_graph(7, 0.5, seed)
    flags = [chromatic_at_most(g, k) for k in range(g.n + 1)]
    assert flags == sorted(flags)
    assert flags.index(True) == chromatic_number(g)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_blowups_of_F_map_back_onto_F(d):
    f = make_F(d)
    rng = np.random.default_rng(d)
    for _ in range(3):
        sizes = [int(s) for s in rng.integers(1, 3, size=f.n)]
        g = blowup(f, sizes)
        collapse = HomomorphismMap(g.n, f.n, tuple(i for i, s in enumerate(sizes) for _ in range(s)))
        assert collapse.is_edge_preserving(g, f)
        hom = find_homomorphism(g, f)
        assert hom is not None and hom.is_edge_preserving(g, f)
