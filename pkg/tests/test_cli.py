"""CLI subcommands, exit codes, deterministic output."""
import json
import math

import pytest

from urbanflux.cli import main


@pytest.fixture()
def power_spec(tmp_path):
    path = tmp_path / "power.json"
    path.write_text(json.dumps({"family": "power", "alpha": 0.5}))
    return str(path)


@pytest.fixture()
def column_scenario(tmp_path):
    doc = {
        "tau": {"family": "piecewise", "jump_at_zero": 0.0, "pieces": [
            {"start": 0.0, "kind": "affine", "c0": 0.0, "c1": 1.0},
            {"start": 0.2, "kind": "quadratic", "c0": -0.05, "c1": 1.5, "c2": -1.25},
            {"start": 0.4, "kind": "affine", "c0": 0.15, "c1": 0.5},
            {"start": 0.6, "kind": "sqrt", "c0": -0.55, "c1": 1.0, "c2": 0.4},
        ]},
        "mu_plus": {"atoms": [{"p": [0, 0], "m": 0.4}, {"p": [1, -2], "m": 0.2},
                              {"p": [2, 0], "m": 0.4}]},
        "mu_minus": {"atoms": [{"p": [0, 1], "m": 0.4}, {"p": [1, 3], "m": 0.2},
                               {"p": [2, 1], "m": 0.4}]},
        "network": {"a": 1.0, "segments": [
            {"p": [0, 0], "q": [0, 1], "b": 0.5},
            {"p": [2, 0], "q": [2, 1], "b": 0.5},
        ]},
        "config": {"report_ties": True},
    }
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture()
def vee_scenario(tmp_path):
    segments = []
    for i in range(1, 11):
        z = [0.5, 1.0 / i]
        segments.append({"p": [0, 0], "q": z, "b": 1.0})
        segments.append({"p": z, "q": [1, 0], "b": 1.0})
    doc = {
        "tau": {"family": "power", "alpha": 1.0},
        "mu_plus": {"atoms": [{"p": [0, 0], "m": 1.0}]},
        "mu_minus": {"atoms": [{"p": [1, 0], "m": 1.0}]},
        "network": {"a": "inf", "segments": segments},
    }
    path = tmp_path / "vee.json"
    path.write_text(json.dumps(doc))
    return str(path)


def test_cost_table_has_conjugate_values(power_spec, tmp_path, capsys):
    out = tmp_path / "table.csv"
    code = main(["cost", "--spec", power_spec, "--table", "b=0.1:2:20",
                 "--out", str(out)])
    assert code == 0
    rows = out.read_text().strip().splitlines()
    assert rows[0] == "b,epsilon"
    table = {float(r.split(",")[0]): float(r.split(",")[1]) for r in rows[1:]}
    assert table[2.0] == pytest.approx(0.125, abs=1e-10)


def test_beckmann_vee_value(vee_scenario, tmp_path):
    out = tmp_path / "out.json"
    assert main(["beckmann", "--scenario", vee_scenario, "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["value"] == pytest.approx(math.sqrt(1.04), abs=1e-6)


def test_branched_reports_ties(column_scenario, tmp_path):
    out = tmp_path / "out.json"
    assert main(["branched", "--scenario", column_scenario, "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["value"] == pytest.approx(0.4 * math.sqrt(5.0) + 0.8, abs=1e-6)
    assert len(data["ties"]) == 2


def test_wasserstein(column_scenario, tmp_path):
    out = tmp_path / "out.json"
    assert main(["wasserstein", "--scenario", column_scenario,
                 "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["value"] == pytest.approx(0.4 * math.sqrt(5.0) + 0.5, abs=1e-9)


def test_bridge_from_network(column_scenario, tmp_path):
    out = tmp_path / "out.json"
    assert main(["bridge", "--scenario", column_scenario, "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["certificate"]["holds"] is True
    assert data["certificate"]["J"] <= data["certificate"]["U"] + 1e-8


def test_report_passes(column_scenario, tmp_path):
    out = tmp_path / "report.json"
    assert main(["report", "--scenario", column_scenario, "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["pass"] is True


def test_verify_all_fixtures(tmp_path):
    out = tmp_path / "verify.txt"
    assert main(["verify", "--fixtures", "all", "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert sum(1 for line in lines if line.startswith("PASS")) >= 5
    assert not any(line.startswith("FAIL") for line in lines)


def test_render_svg(column_scenario, tmp_path):
    out = tmp_path / "figure.svg"
    assert main(["render", "--scenario", column_scenario, "--out", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("<svg") and text.rstrip().endswith("</svg>")


def test_distance_command(tmp_path):
    net = tmp_path / "net.json"
    net.write_text(json.dumps({"a": 2.0, "segments": [
        {"p": [0, 0], "q": [1, 0], "b": 0.5}]}))
    out = tmp_path / "d.json"
    assert main(["distance", "--network", str(net), "--x", "0,0",
                 "--y", "1,0", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["value"] == pytest.approx(0.5)


def test_outputs_byte_identical(column_scenario, tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    main(["branched", "--scenario", column_scenario, "--out", str(out1)])
    main(["branched", "--scenario", column_scenario, "--out", str(out2)])
    assert out1.read_bytes() == out2.read_bytes()


def test_malformed_input_exits_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    assert main(["branched", "--scenario", str(bad)]) == 2


def test_missing_file_exits_2(tmp_path):
    assert main(["branched", "--scenario", str(tmp_path / "absent.json")]) == 2
