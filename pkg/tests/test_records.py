import json
import os
from fractions import Fraction

import pytest

from graphs.constructions import (complete_graph, complete_multipartite, cycle_graph, make_wheel, path_graph,
                                  petersen_graph)
from reports.pipelines import experiment_delta4, gap_report, hom_report, lower_threshold, peel_report, solve_pair
from reports.records import ExperimentRecord, graph_stats, rows_to_csv, strip_timings, write_json_atomic
from solvers.caps import CapExceededError, CapGuard


def test_strip_timings_collects_paths():
    timings = {}
    out = strip_timings({"a": 1, "wall_time_ms": 3, "b": [{"wall_time_ms": 2, "c": 0}]}, timings)
    assert out == {"a": 1, "b": [{"c": 0}]}
    assert timings == {"wall_time_ms": 3, "b[0].wall_time_ms": 2}


def test_record_keeps_timings_in_the_envelope():
    record = ExperimentRecord("demo", {"n": 5}, {"cert": {"value": 3, "wall_time_ms": 1.5}}).finish()
    assert json.loads(record.result_json()) == {"inputs": {"n": 5}, "cert": {"value": 3}}
    envelope = record.to_dict()["envelope"]
    assert envelope["timings_ms"] == {"cert.wall_time_ms": 1.5}
    assert envelope["experiment"] == "demo"
    assert envelope["started"].endswith("Z")


def test_atomic_json_writer(tmp_path):
    path = str(tmp_path / "sub" / "out.json")
    write_json_atomic(path, {"b": 1, "a": 1})
    with open(path) as f:
        assert f.read() == '{\n  "a": 1,\n  "b": 1\n}\n'
    assert os.listdir(tmp_path / "sub") == ["out.json"]


def test_csv_rows():
    assert rows_to_csv([]) == ""
    assert rows_to_csv([{"d": 2, "gamma": 0.5}]) == "d,gamma\n2,0.5\n"


def test_graph_stats():
    stats = graph_stats(make_wheel(2))
    assert stats == {"n": 6, "e": 10, "min_degree": 3, "max_degree": 5, "degree_histogram": {"3": 5, "5": 1}}


def test_solve_pair_exact():
    pair = solve_pair(cycle_graph(5), 3, CapGuard())
    assert pair["P"]["mode"] == pair["Kf"]["mode"] == "exact"
    assert (pair["P"]["value"], pair["Kf"]["value"]) == (4, 5)
    assert pair["equal"] is False


def test_solve_pair_degrades_to_bounds():
    guard = CapGuard(kcut_caps={2: 3}, krfree_caps={3: 3})
    pair = solve_pair(petersen_graph(), 3, guard, restarts=5)
    assert pair["P"]["mode"] == pair["Kf"]["mode"] == "bounds"
    assert pair["P"]["value"] is None
    assert pair["P"]["lower"] <= 12
    assert pair["Kf"]["upper"] == 15
    assert pair["equal"] is None
    with pytest.raises(CapExceededError):
        solve_pair(petersen_graph(), 3, guard, exact=True)


def test_gap_report_thresholds():
    report = gap_report(complete_graph(4), 4, CapGuard())
    assert report["equal"] is True
    assert report["P_3"]["value"] == report["K_4f"]["value"] == 5
    assert report["lower_threshold"] == "8/11"
    assert report["upper_threshold"] == "61/64"
    assert report["min_degree_ratio"] == "3/4"
    assert report["at_least_upper_threshold"] is False
    assert "upper_threshold" not in gap_report(cycle_graph(5), 3, CapGuard())
    assert lower_threshold(3) == Fraction(5, 8)


def test_experiment_delta4_at_eleven():
    result = experiment_delta4(11, seed=2, guard=CapGuard())
    assert result["exact"]
    assert result["layout"]["sizes"] == [2, 2, 2, 1, 1, 3]
    assert result["witness_edges"] == result["witness_formula"] == 37
    assert result["threshold"] == "184/5"
    assert result["witness_above_threshold"]
    assert result["K_4f"]["value"] >= 37
    assert result["strict_gap"] == (result["P_3"]["value"] < result["K_4f"]["value"])


def test_peel_and_hom_reports():
    peeled = peel_report(path_graph(4), "1/2")
    assert peeled["replayed"] and peeled["min_degree_above_gamma"] and peeled["edge_bound_holds"]
    hom = hom_report(make_wheel(2), d_max=3)
    assert hom["wheel_type"] == 2
    assert "hypothesis" not in hom
    assert hom_report(make_wheel(3), d_max=2)["map"] is None
    refused = hom_report(complete_multipartite([3, 3]), r=2, d=7)
    assert refused["wheel_type"] == 1
    assert refused["hypothesis"]["map_found"] is None and refused["hypothesis"]["refused"]
