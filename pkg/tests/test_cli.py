import json
import math

import pytest

from lipmix import cli, jsonio


def run(argv):
    return cli.main(argv)


def test_generate_circle_and_turning(tmp_path, capsys):
    out = tmp_path / "c.json"
    assert run(["generate", "--kind", "circle", "--radius", "1", "--samples", "200",
                "-o", str(out)]) == 0
    doc = jsonio.load(out)
    assert doc["topology"] == "circle"
    assert len(doc["points"]) == 200
    rep_path = tmp_path / "turn.json"
    assert run(["estimate", "--what", "turning", "--curve", str(out),
                "--exhaustive", "-o", str(rep_path)]) == 0
    rep = jsonio.load(rep_path)
    assert abs(rep["report"]["value"] - 1.0) < 0.01


def test_generate_deterministic_bytes(tmp_path):
    out = tmp_path / "a.json"
    argv = ["generate", "--kind", "graph-curve", "--profile", "cusp",
            "--extent", "1", "--samples", "101", "-o", str(out)]
    assert run(argv) == 0
    first = out.read_bytes()
    assert run(argv) == 0
    assert out.read_bytes() == first


def test_estimate_deterministic_bytes(tmp_path):
    curve = tmp_path / "c.json"
    run(["generate", "--kind", "segment", "--samples", "100", "-o", str(curve)])
    out = tmp_path / "r.json"
    argv = ["estimate", "--what", "turning", "--curve", str(curve),
            "--budget", "200", "--seed", "7", "-o", str(out)]
    assert run(argv) == 0
    first = out.read_bytes()
    assert run(argv) == 0
    assert out.read_bytes() == first


def test_construct_median_mixer_rows(tmp_path):
    curve = tmp_path / "seg.json"
    run(["generate", "--kind", "segment", "--samples", "11", "-o", str(curve)])
    out = tmp_path / "rows.json"
    assert run(["construct", "--kind", "median-mixer", "--curve", str(curve),
                "--eval-inline", "1,9,4;3,3,8", "-o", str(out)]) == 0
    doc = jsonio.load(out)
    assert doc["rows"][0]["output"][0] == pytest.approx(0.4, abs=1e-15)
    assert doc["rows"][1]["output"][0] == pytest.approx(0.3, abs=1e-15)


def test_construct_box_mixer_without_curve(tmp_path):
    out = tmp_path / "rows.json"
    dump = tmp_path / "box.json"
    assert run(["construct", "--kind", "box-mixer", "--t", "1.5",
                "--samples-per-edge", "32", "--eval-inline", "0,0,1",
                "--dump-curve", str(dump), "-o", str(out)]) == 0
    curve = jsonio.load(dump)
    assert curve["topology"] == "circle"
    doc = jsonio.load(out)
    assert doc["domain"]["radius"] == pytest.approx(1 / 6)


def test_estimate_lip_of_construct(tmp_path):
    curve = tmp_path / "seg.json"
    run(["generate", "--kind", "segment", "--samples", "200", "-o", str(curve)])
    out = tmp_path / "lip.json"
    assert run(["estimate", "--what", "lip", "--construct", "median-mixer",
                "--curve", str(curve), "--budget", "2000", "--seed", "3",
                "-o", str(out)]) == 0
    rep = jsonio.load(out)["report"]
    assert rep["value"] <= 1 + 1e-12
    assert rep["budget"] == 2000 and rep["seed"] == 3


def test_estimate_chain_components(tmp_path):
    space = tmp_path / "two.json"
    run(["generate", "--kind", "two-lines", "--extent", "10",
         "--samples-per-line", "201", "-o", str(space)])
    out = tmp_path / "chain.json"
    assert run(["estimate", "--what", "chain", "--curve", str(space),
                "--eps", "0.5", "-o", str(out)]) == 0
    assert jsonio.load(out)["components"] == 2


def test_estimate_csv_row(tmp_path, capsys):
    curve = tmp_path / "c.json"
    run(["generate", "--kind", "circle", "--samples", "64", "-o", str(curve)])
    capsys.readouterr()
    csv_path = tmp_path / "rows.csv"
    assert run(["estimate", "--what", "turning", "--curve", str(curve),
                "--exhaustive", "--format", "csv", "--csv", str(csv_path)]) == 0
    printed = capsys.readouterr().out.strip()
    assert printed.startswith("turning_constant,")
    line = csv_path.read_text().strip()
    assert line == printed
    assert len(line.split(",")) >= 6


def test_hyperspace_dist(tmp_path, capsys):
    curve = tmp_path / "seg.json"
    run(["generate", "--kind", "segment", "--samples", "4", "-o", str(curve)])
    capsys.readouterr()
    # samples at 0, 1/3, 2/3, 1
    assert run(["hyperspace", "--op", "dist", "--base", str(curve),
                "--a", "0,1", "--b", "0,3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["distance"] == pytest.approx(2 / 3, abs=1e-12)


def test_obstruct_arc(tmp_path):
    curve = tmp_path / "arc.json"
    run(["generate", "--kind", "circular-arc", "--radius", "1",
         "--angular-size", str(3 * math.pi / 2), "--samples", "256",
         "-o", str(curve)])
    out = tmp_path / "ob.json"
    assert run(["obstruct", "--curve", str(curve), "--z0", "0,0",
                "-o", str(out)]) == 0
    doc = jsonio.load(out)
    assert doc["lower_bound"] == pytest.approx(1 / math.sqrt(2), abs=1e-6)
    assert doc["no_obstruction"] is False


def test_obstruct_segment_no_obstruction(tmp_path):
    curve = tmp_path / "seg.json"
    run(["generate", "--kind", "segment", "--samples", "200", "-o", str(curve)])
    out = tmp_path / "ob.json"
    assert run(["obstruct", "--curve", str(curve), "--z0", "0.5,2.0",
                "-o", str(out)]) == 0
    doc = jsonio.load(out)
    assert doc["lower_bound"] == 0.0 and doc["no_obstruction"] is True


def test_exit_code_2_on_bad_input(tmp_path):
    missing = tmp_path / "nope.json"
    assert run(["estimate", "--what", "turning", "--curve", str(missing)]) == 2
    assert run(["generate", "--kind", "box-curve", "--t", "3.0",
                "-o", str(tmp_path / "x.json")]) == 2


def test_exit_code_3_on_domain_error(tmp_path):
    curve = tmp_path / "circ.json"
    run(["generate", "--kind", "circle", "--samples", "64", "-o", str(curve)])
    # triple far outside the local mixer domain
    assert run(["construct", "--kind", "circle-mixer", "--curve", str(curve),
                "--eval-inline", "0,16,32"]) == 3


def test_verify_subset(capsys):
    assert run(["verify", "--criteria", "9,10"]) == 0
    out = capsys.readouterr().out
    assert "2/2 criteria passed" in out
