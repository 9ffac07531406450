import json
import math
import os
import subprocess

import pytest

hg = pytest.importorskip("_hourglass")

SEGMENT = {"vertices": [[0.0, 0.0], [1.0, 0.0]], "edges": [[0, 1]]}
SEGMENT_UP = {"vertices": [[0.0, 0.3], [1.0, 0.3]], "edges": [[0, 1]]}

K22_KINETIC = {
    "n_left": 2,
    "n_right": 2,
    "edges": [
        {"u": 0, "v": 0, "plan": {"domain": {"kind": "interval", "end": 4.0},
                                  "pieces": [{"t0": 0.0, "t1": 4.0,
                                              "form": {"linear": {"a": 1.0, "b": 0.0}}}]}},
        {"u": 0, "v": 1, "plan": {"domain": {"kind": "interval", "end": 4.0},
                                  "pieces": [{"t0": 0.0, "t1": 4.0,
                                              "form": {"linear": {"a": 5.0, "b": 0.0}}}]}},
        {"u": 1, "v": 0, "plan": {"domain": {"kind": "interval", "end": 4.0},
                                  "pieces": [{"t0": 0.0, "t1": 4.0,
                                              "form": {"linear": {"a": 4.0, "b": 0.0}}}]}},
        {"u": 1, "v": 1, "plan": {"domain": {"kind": "interval", "end": 4.0},
                                  "pieces": [{"t0": 0.0, "t1": 4.0,
                                              "form": {"linear": {"a": 2.0, "b": 1.0}}}]}},
    ],
}


def test_static_bottleneck_matches_brute_force():
    edges = [(0, 0, 1.0), (0, 1, 5.0), (1, 0, 4.0), (1, 1, 3.0)]
    value, right_of, bottleneck_edge = hg.static_bottleneck(2, 2, edges)
    assert value == hg.brute_force_bottleneck(2, 2, edges) == 3.0
    assert sorted(right_of) == [0, 1]
    assert edges[bottleneck_edge][2] == 3.0


def test_diagram_bottleneck():
    assert hg.diagram_bottleneck([(0.0, 4.0)], [(0.0, 1.0)]) == pytest.approx(2.0)
    assert hg.diagram_bottleneck([(0.0, 4.0)], [(0.0, 4.0)]) == 0.0


def test_run_kinetic_k22():
    out = hg.run_kinetic(json.dumps(K22_KINETIC), 4.0)
    # exact integral of the bottleneck: 2+t on [0,3), 5 on [3,4)
    assert out["integral"] == pytest.approx(15.5, abs=1e-9)
    external = [(t, kind) for (t, kind, _, _) in out["events"] if kind != "internal"]
    kinds = [k for _, k in external]
    assert "U2" in kinds and "U1" in kinds
    times = dict((k, t) for t, k in external)
    assert times["U2"] == pytest.approx(2.0, abs=1e-9)
    assert times["U1"] == pytest.approx(3.0, abs=1e-9)


def test_integrated_distance_translated_segment():
    out = hg.integrated_distance(
        SEGMENT["vertices"], SEGMENT["edges"],
        SEGMENT_UP["vertices"], SEGMENT_UP["edges"])
    assert out["value"] == pytest.approx(1.2, abs=1e-9)
    sampled = hg.sampled_distance(
        SEGMENT["vertices"], SEGMENT["edges"],
        SEGMENT_UP["vertices"], SEGMENT_UP["edges"], 2000)
    assert sampled == pytest.approx(1.2, rel=1e-3)


def test_lower_star_diagram():
    essential, finite = hg.lower_star_diagram(
        [[0.0, 0.0], [1.0, 1.0], [2.0, 0.0]], [[0, 1], [1, 2]], math.pi / 2)
    assert essential == pytest.approx(0.0)
    assert len(finite) == 1
    assert finite[0] == (pytest.approx(0.0), pytest.approx(1.0))


@pytest.fixture
def cli():
    path = os.environ.get("HOURGLASS_CLI")
    if not path:
        pytest.skip("HOURGLASS_CLI not set")
    return path


def test_cli_static(cli, tmp_path):
    graph = tmp_path / "g.json"
    graph.write_text(json.dumps({
        "n_left": 1, "n_right": 1,
        "edges": [{"u": 0, "v": 0, "w": 2.5}],
    }))
    res = subprocess.run([cli, "static-bottleneck", str(graph)],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert "bottleneck 2.5" in res.stdout


def test_cli_parse_error(cli, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    res = subprocess.run([cli, "static-bottleneck", str(bad)],
                         capture_output=True, text=True)
    assert res.returncode == 1


def test_cli_infeasible(cli, tmp_path):
    graph = tmp_path / "g.json"
    graph.write_text(json.dumps({
        "n_left": 2, "n_right": 2,
        "edges": [{"u": 0, "v": 0, "w": 1.0}, {"u": 1, "v": 0, "w": 1.0}],
    }))
    res = subprocess.run([cli, "static-bottleneck", str(graph)],
                         capture_output=True, text=True)
    assert res.returncode == 2
    assert "Hall witness" in res.stderr


def test_cli_kinetic_deterministic(cli, tmp_path):
    graph = tmp_path / "k.json"
    graph.write_text(json.dumps(K22_KINETIC))
    outputs = []
    for run in range(2):
        trace = tmp_path / f"trace{run}.csv"
        traj = tmp_path / f"traj{run}.csv"
        res = subprocess.run(
            [cli, "kinetic", str(graph), "--until", "4",
             "--out-trace", str(trace), "--out-traj", str(traj)],
            capture_output=True, text=True)
        assert res.returncode == 0
        assert "integral 15.5" in res.stdout
        outputs.append((trace.read_bytes(), traj.read_bytes()))
    assert outputs[0] == outputs[1]
    header = outputs[0][0].decode().splitlines()[0]
    assert header == "time,event_kind,edge,root_after,bottleneck_after"


def test_cli_pht_distance(cli, tmp_path):
    g1 = tmp_path / "g1.json"
    g2 = tmp_path / "g2.json"
    g1.write_text(json.dumps(SEGMENT))
    g2.write_text(json.dumps(SEGMENT_UP))
    res = subprocess.run([cli, "pht-distance", str(g1), str(g2)],
                         capture_output=True, text=True)
    assert res.returncode == 0
    value = float(res.stdout.split("integrated_distance ")[1].split()[0])
    assert value == pytest.approx(1.2, abs=1e-9)
