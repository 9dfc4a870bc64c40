import json
import math

import pytest

import boardcore


def test_default_config_round_trips():
    cfg = json.loads(boardcore.default_config())
    assert cfg["brokerage_mode"] == "middleman"
    assert cfg["brokerage_threshold"] == "1"
    assert cfg["synth"]["directors"] > 0


def test_kcore_path_graph_uniform():
    # path a-b-c: reach graph has two weight-2 edges and one weight-1 edge
    edges = [(0, 1, 2), (1, 2, 2), (0, 2, 1)]
    out = boardcore.weighted_kcore(3, edges)
    assert out["degeneracy_halfunits"] == 3
    assert out["coreness_halfunits"] == [3, 3, 3]
    assert sorted(out["max_core"]) == [0, 1, 2]


def test_bowtie_brokerage_scores():
    # two triangles sharing node 2
    edges = [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]
    scores = boardcore.brokerage_scores(5, edges, "middleman")
    assert scores == ["0", "0", "1", "0", "0"]


def test_prune_complete_graph_to_empty():
    edges = [(u, v) for u in range(5) for v in range(u + 1, 5)]
    out = boardcore.prune_brokers(5, edges, "1", "middleman")
    assert out["survivors"] == []
    assert out["rounds"][0]["removed"] == 5


def test_fit_logistic_intercept_only():
    x = [[1.0]] * 10
    y = [1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
    out = boardcore.fit_logistic(x, y)
    assert out["converged"]
    assert out["beta"][0] == pytest.approx(math.log(3 / 7), abs=1e-8)


def test_pipeline_on_small_synthetic_registry(tmp_path):
    cfg = json.loads(boardcore.default_config())
    cfg["out_dir"] = str(tmp_path / "artifacts")
    cfg["synth"]["directors"] = 220
    cfg["synth"]["boards"] = 100
    cfg["synth"]["core_size"] = 12
    cfg["synth"]["core_offsets"] = [1, 3]
    cfg["synth"]["base_rate"] = 0.2
    res = boardcore.run_pipeline(json.dumps(cfg))
    names = [s["name"] for s in res["stages"]]
    assert names == ["synth", "ingest", "ranks", "graphs", "panel", "fit", "report"]
    assert not any(s["cached"] for s in res["stages"])
    assert res["core_size_mean"] >= 12

    again = boardcore.run_pipeline(json.dumps(cfg))
    assert all(s["cached"] for s in again["stages"])
    assert again["core_size_mean"] == res["core_size_mean"]
