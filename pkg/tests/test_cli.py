import json

import pytest

from graphs.constructions import complete_multipartite, cycle_graph, path_graph, petersen_graph
from graphs.formats import dumps_graph, read_graph
from main import EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_PASS, EXIT_USAGE, TuranGapToolkit, main


@pytest.fixture
def config_path(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"solver": {"kcut_caps": {"2": 12, "3": 12}, "krfree_caps": {"3": 12, "4": 12},
                                           "local_restarts": 4}}))
    return str(path)


def write_graph(tmp_path, name, g, fmt="edgelist"):
    path = tmp_path / name
    path.write_bytes(dumps_graph(g, fmt))
    return str(path)


def last_json(text):
    return json.loads(text[text.index("{"):])


def test_construct_writes_graph_and_sidecar(tmp_path, config_path):
    out = str(tmp_path / "f3.g6")
    assert main(["--config", config_path, "construct", "--family", "F", "--d", "3", "--out", out]) == EXIT_PASS
    g = read_graph(out)
    assert (g.n, g.num_edges) == (8, 12)
    with open(out + ".json") as f:
        sidecar = json.load(f)
    assert sidecar["construction"] == {"family": "F", "d": 3}
    assert sidecar["stats"]["n"] == 8 and sidecar["stats"]["e"] == 12

    again = str(tmp_path / "again.g6")
    assert main(["--config", config_path, "construct", "--spec-file", out + ".json", "--out", again]) == EXIT_PASS
    with open(out, "rb") as a, open(again, "rb") as b:
        assert a.read() == b.read()


def test_construct_G4_from_flags(tmp_path, config_path):
    out = str(tmp_path / "g4.txt")
    argv = ["--config", config_path, "construct", "--family", "G4", "--sizes", "2,2,2,2,2", "--apex", "4",
            "--theta", "1/8", "--out", out]
    assert main(argv) == EXIT_PASS
    g = read_graph(out)
    assert (g.n, g.num_edges) == (14, 70)


def test_construct_argument_errors(config_path, capsys):
    assert main(["--config", config_path, "construct"]) == EXIT_USAGE
    assert main(["--config", config_path, "construct", "--family", "F"]) == EXIT_FAIL
    assert "--d" in capsys.readouterr().err


def test_usage_errors_exit_64(config_path):
    with pytest.raises(SystemExit) as info:
        main(["--config", config_path, "gap"])
    assert info.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["--config", config_path, "verify", "nonsense"])
    assert info.value.code == EXIT_USAGE


def test_gap_on_pentagon(tmp_path, config_path, capsys):
    path = write_graph(tmp_path, "c5.txt", cycle_graph(5))
    assert main(["--config", config_path, "gap", path, "--r", "3"]) == EXIT_PASS
    record = last_json(capsys.readouterr().out)
    result = record["result"]
    assert result["P_2"]["value"] == 4
    assert result["K_3f"]["value"] == 5
    assert result["equal"] is False
    assert "wall_time_ms" not in json.dumps(result)
    assert record["envelope"]["experiment"] == "gap"


def test_gap_exits_inconclusive_when_bounds_leave_equality_open(tmp_path, capsys):
    config = tmp_path / "tiny.json"
    config.write_text(json.dumps({"solver": {"kcut_caps": {"2": 3}, "krfree_caps": {"3": 3}, "local_restarts": 4}}))
    path = write_graph(tmp_path, "petersen.txt", petersen_graph())
    assert main(["--config", str(config), "gap", path, "--r", "3"]) == EXIT_INCONCLUSIVE
    result = last_json(capsys.readouterr().out)["result"]
    assert result["P_2"]["mode"] == "bounds"
    assert result["equal"] is None


def test_experiment_delta4_result_is_reproducible(tmp_path, config_path):
    outs = [str(tmp_path / "a.json"), str(tmp_path / "b.json")]
    for out in outs:
        assert main(["--config", config_path, "experiment-delta4", "--n", "11", "--seed", "3", "--out", out]) == 0
    results = []
    for out in outs:
        with open(out) as f:
            results.append(json.dumps(json.load(f)["result"], sort_keys=True))
    assert results[0] == results[1]
    result = json.loads(results[0])
    assert result["spec"]["base"]["part_sizes"] == [2, 2, 2, 1, 1]
    assert result["witness_matches_formula"]
    assert result["exact"]
    assert result["K_4f"]["value"] >= result["witness_edges"]


def test_peel_command(tmp_path, config_path, capsys):
    path = write_graph(tmp_path, "p4.txt", path_graph(4))
    assert main(["--config", config_path, "peel", path, "--gamma", "1/2"]) == EXIT_PASS
    result = last_json(capsys.readouterr().out)["result"]
    assert result["trace"]["final_labels"] == []
    assert result["replayed"]


def test_hom_command(tmp_path, config_path, capsys):
    path = write_graph(tmp_path, "k333.g6", complete_multipartite([3, 3, 3]), "graph6")
    assert main(["--config", config_path, "hom", path, "--r", "3", "--d", "2"]) == EXIT_PASS
    result = last_json(capsys.readouterr().out)["result"]
    assert result["wheel_type"] == 1
    assert result["hypothesis"]["map_found"] is True


def test_hom_command_past_the_cap_is_inconclusive(tmp_path, config_path, capsys):
    path = write_graph(tmp_path, "k33.txt", complete_multipartite([3, 3]))
    assert main(["--config", config_path, "hom", path, "--r", "2", "--d", "7"]) == EXIT_INCONCLUSIVE
    hypothesis = last_json(capsys.readouterr().out)["result"]["hypothesis"]
    assert hypothesis["hypothesis_met"]
    assert hypothesis["map_found"] is None
    assert "cap" in hypothesis["refused"]
    assert not hypothesis["bug"]


def test_verify_upper_passes(config_path, capsys):
    assert main(["--config", config_path, "verify", "upper", "--rmax", "50"]) == EXIT_PASS
    assert capsys.readouterr().out.rstrip().endswith("upper: pass")


def test_verify_lll_coarse_grid_is_inconclusive(config_path):
    assert main(["--config", config_path, "verify", "lll", "--grid-step", "0.05"]) == EXIT_INCONCLUSIVE


def test_verify_writes_record(tmp_path, config_path):
    out = str(tmp_path / "weak.json")
    assert main(["--config", config_path, "verify", "weak", "--n", "100,1000", "--out", out]) == EXIT_PASS
    with open(out) as f:
        record = json.load(f)
    assert record["result"]["report"]["status"] == "pass"
    assert record["envelope"]["experiment"] == "verify-weak"


def test_minlemma_csv_sweep(tmp_path, config_path):
    csv_path = tmp_path / "sweep.csv"
    argv = ["--config", config_path, "verify", "minlemma", "--d", "2", "--gamma", "5/8", "--restarts", "2",
            "--csv", str(csv_path), "--points", "3"]
    assert main(argv) == EXIT_PASS
    lines = csv_path.read_text().splitlines()
    assert lines[0].startswith("d,gamma,feasible")
    assert len(lines) == 4


def test_minlemma_sweep_ends_feasible_at_the_exact_ceiling(tmp_path, config_path):
    csv_path = tmp_path / "sweep3.csv"
    argv = ["--config", config_path, "verify", "minlemma", "--d", "3", "--gamma", "8/13", "--restarts", "5",
            "--csv", str(csv_path), "--points", "4"]
    assert main(argv) == EXIT_PASS
    last = csv_path.read_text().splitlines()[-1].split(",")
    assert float(last[1]) == 8 / 13
    assert last[2] == "True"


def test_missing_config_warns_and_uses_defaults(tmp_path, capsys):
    toolkit = TuranGapToolkit(config_path=str(tmp_path / "absent.json"))
    assert "WARNING" in capsys.readouterr().out
    assert toolkit.guard.cap_for("max_kcut", 2) == 24


def test_invalid_config_exits(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(SystemExit) as info:
        TuranGapToolkit(config_path=str(bad))
    assert info.value.code == EXIT_FAIL


def test_environment_overlay(monkeypatch, config_path):
    monkeypatch.setenv("TURANGAP_SEED", "7")
    monkeypatch.setenv("TURANGAP_THREADS", "2")
    toolkit = TuranGapToolkit(config_path=config_path)
    assert toolkit.seed == 7
    assert toolkit.threads == 2
    assert toolkit.lemmas["wheel_seed"] == 7
