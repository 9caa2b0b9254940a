from __future__ import annotations

import json
import math

import numpy as np
import pytest

from timelike.cli import run_cli
from timelike.errors import ParseError, RenderError, ValidationError
from timelike.render import Overlays, render_svg
from timelike.scene import parse_scene, serialize_scene

BALL_SCENE = {
    "chart": {"kind": "euclidean", "dimension": 2},
    "bodies": [{"id": "K", "kind": "ball", "center": [0, 0], "radius": 1}],
    "context": {"kind": "funk", "future": "K"},
    "points": {"p": [-2, 0]},
    "curves": {"chord": {"kind": "segment", "from": "p", "to": [-1.5, 0]}},
}

STRIP_SCENE = {
    "chart": {"kind": "euclidean", "dimension": 2},
    "bodies": [
        {"id": "P", "kind": "hpolytope", "faces": [{"normal": [1, 0], "offset": -1}]},
        {"id": "F", "kind": "hpolytope", "faces": [{"normal": [-1, 0], "offset": -1}]},
    ],
    "context": {"kind": "hilbert", "past": "P", "future": "F"},
}

DESITTER_SCENE = {
    "chart": {"kind": "spherical", "dimension": 2},
    "bodies": [{"id": "K", "kind": "cap", "center": [-1, 0, 0], "radius": math.pi / 4}],
    "context": {"kind": "projective_desitter", "body": "K"},
}

KLEIN_SCENE = {
    "chart": {"kind": "hyperbolic", "dimension": 2, "coordinates": "klein"},
    "bodies": [{"id": "K", "kind": "hpolytope", "faces": [{"normal": [-1, 0], "offset": -0.5}]}],
    "context": {"kind": "funk", "body": "K"},
}


@pytest.fixture
def scene_file(tmp_path):
    def write(doc, name="s.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)
    return write


def test_minimal_scene():
    scene = parse_scene(json.dumps(BALL_SCENE).encode())
    assert len(scene.bodies) == 1
    assert np.allclose(scene.points["p"], (-2, 0))


def test_round_trip_is_bit_exact():
    for doc in (BALL_SCENE, STRIP_SCENE, DESITTER_SCENE, KLEIN_SCENE):
        scene = parse_scene(json.dumps(doc))
        text = serialize_scene(scene)
        again = parse_scene(text)
        assert serialize_scene(again) == text
        for key, body in scene.bodies.items():
            other = again.bodies[key]
            if hasattr(body, "center"):
                assert np.array_equal(body.center, other.center) and body.radius == other.radius
            else:
                assert all(np.array_equal(a.normal, b.normal) and a.offset == b.offset
                           for a, b in zip(body.faces, other.faces))


def test_parse_error_has_position():
    with pytest.raises(ParseError) as info:
        parse_scene('{"chart": {"kind": "euclidean",\n  "dimension": 2,}}')
    assert info.value.line == 2


def test_non_unit_spherical_point_rejected():
    doc = json.loads(json.dumps(DESITTER_SCENE))
    doc["bodies"][0]["center"] = [-1, 1, 0]
    with pytest.raises(ValidationError, match="body 'K'"):
        parse_scene(json.dumps(doc))


def test_overlapping_hilbert_bodies_rejected():
    doc = {
        "chart": {"kind": "euclidean", "dimension": 2},
        "bodies": [{"id": "A", "kind": "ball", "center": [0, 0], "radius": 1},
                   {"id": "B", "kind": "ball", "center": [1, 0], "radius": 1}],
        "context": {"kind": "hilbert", "past": "A", "future": "B"},
    }
    with pytest.raises(ValidationError, match="disjoint"):
        parse_scene(json.dumps(doc))


def test_unknown_body_reference():
    doc = dict(BALL_SCENE, context={"kind": "funk", "future": "Z"})
    with pytest.raises(ValidationError, match="Z"):
        parse_scene(json.dumps(doc))


def test_cli_funk_example(scene_file, capsys):
    path = scene_file(BALL_SCENE)
    assert run_cli(["funk", "--scene", path, "--from", "-2,0", "--to", "-1.5,0"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["distance"] == pytest.approx(0.693147, abs=1e-6)
    assert record["distance"] == float(f"{math.log(2):.12g}")


def test_cli_order_example(scene_file, capsys):
    path = scene_file(BALL_SCENE)
    assert run_cli(["order", "--scene", path, "--from", "-2,0", "--to", "2,0"]) == 0
    assert capsys.readouterr().out.strip() == "unrelated"
    assert run_cli(["order", "--scene", path, "--from", "p", "--to", "-1.5,0"]) == 0
    assert capsys.readouterr().out.strip() == "precedes"


def test_cli_exit_codes(scene_file, tmp_path, capsys):
    path = scene_file(BALL_SCENE)
    assert run_cli(["funk", "--scene", path, "--from", "-2,0", "--to", "2,0"]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run_cli(["funk", "--scene", str(bad), "--from", "0,0", "--to", "1,0"]) == 2
    assert run_cli(["nonsense"]) == 2
    assert run_cli(["check", "--suite", "desitter"]) == 2
    capsys.readouterr()


def test_cli_hilbert_and_length(scene_file, capsys):
    path = scene_file(STRIP_SCENE)
    assert run_cli(["hilbert", "--scene", path, "--from", "0,0", "--to", "0.5,0", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "distance" and float(lines[1]) == pytest.approx(math.log(3), abs=1e-11)
    ball = scene_file(BALL_SCENE, "b.json")
    assert run_cli(["length", "--scene", ball, "--curve", "chord"]) == 0
    assert json.loads(capsys.readouterr().out)["length"] == pytest.approx(math.log(2), abs=1e-8)


def test_cli_finsler_sphere_cone(scene_file, capsys):
    path = scene_file(BALL_SCENE)
    assert run_cli(["finsler", "--scene", path, "--at", "-2,0", "--direction", "2,0"]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == pytest.approx(2.0)
    assert run_cli(["sphere", "--scene", path, "--apex", "-2,0", "--radius", "0.5", "--count", "5",
                    "--format", "csv"]) == 0
    rows = capsys.readouterr().out.splitlines()
    assert rows[0] == "x0,x1" and len(rows) == 6
    assert run_cli(["cone", "--scene", path, "--apex", "-2,0", "--format", "csv"]) == 0
    rows = capsys.readouterr().out.splitlines()
    # the tangent lines from (-2, 0) make an angle of 30 degrees with the axis
    for row in rows[1:]:
        u = [float(v) for v in row.split(",")]
        assert abs(u[1]) == pytest.approx(0.5, abs=2e-3)


def test_cli_desitter_cone_and_check(scene_file, capsys):
    path = scene_file(DESITTER_SCENE)
    assert run_cli(["cone", "--scene", path, "--apex", "0,1,0"]) == 0
    assert len(json.loads(capsys.readouterr().out)["directions"]) == 2
    assert run_cli(["desitter-check", "--cases", "50", "--seed", "3"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["holds"] and record["alternative_rejected"]


def test_cli_classify_and_klein(scene_file, capsys):
    path = scene_file(KLEIN_SCENE)
    assert run_cli(["classify", "--scene", path, "--from", "-0.2,0", "--to", "0.1,0"]) == 0
    assert capsys.readouterr().out.strip() == "timelike"
    assert run_cli(["funk", "--scene", path, "--from", "-0.2,0", "--to", "0.1,0"]) == 0
    assert json.loads(capsys.readouterr().out)["distance"] > 0


def test_render_future_sphere_arc():
    scene = parse_scene(json.dumps(BALL_SCENE))
    overlays = Overlays(apex=np.array([-2.0, 0.0]), radii=(math.log(2),))
    svg = render_svg(scene, overlays).decode()
    # (-1.5, 0) in the default 600 x 600 view
    assert "150.000,300.000" in svg
    assert svg == render_svg(scene, overlays).decode()


def test_render_bodies_only():
    scene = parse_scene(json.dumps(BALL_SCENE))
    svg = render_svg(scene).decode()
    assert svg.count("<polygon") == 1 and "<polyline" not in svg and "<line" not in svg


def test_render_requires_planar_scene():
    doc = {"chart": {"kind": "euclidean", "dimension": 3},
           "bodies": [{"id": "K", "kind": "ball", "center": [0, 0, 0], "radius": 1}],
           "context": {"kind": "funk", "body": "K"}}
    with pytest.raises(RenderError):
        render_svg(parse_scene(json.dumps(doc)))


def test_render_cli_is_byte_identical(scene_file, tmp_path):
    path = scene_file(DESITTER_SCENE)
    outs = []
    for i in range(2):
        out = tmp_path / f"r{i}.svg"
        assert run_cli(["render", "--scene", path, "--apex", "0.6,0.8,0", "--null", "--view", "-2,2,-2,2", "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] and b"<svg" in outs[0]
