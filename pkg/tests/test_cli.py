"""Command line front end: parsing, commands, exit codes."""

import json
from pathlib import Path

import pytest

from cdgacyc import cli
from cdgacyc.minimal_model import verify_minimal

FIXTURES = Path(__file__).resolve().parent.parent / "src" / "cdgacyc" / "fixtures"

S2 = str(FIXTURES / "sphere2.json")
S3 = str(FIXTURES / "sphere3.json")
S2H = str(FIXTURES / "s2_cohomology.json")
TRIV = str(FIXTURES / "trivial.json")


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_hh_table(capsys):
    code, out, _ = run(["hh", S3, "--cutoff", "8"], capsys)
    assert code == 0
    assert "HH up to degree 8" in out
    dims = [int(line.split()[2]) for line in out.splitlines()
            if line.strip().startswith(tuple("0123456789"))]
    assert dims == [1, 0, 1, 1, 1, 1, 1, 1, 1]


def test_hh_json_schema(capsys):
    code, out, _ = run(["hh", S3, "--cutoff", "6", "--json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"degrees"}
    for row in doc["degrees"]:
        assert set(row) == {"n", "total", "weights", "certified"}


def test_ch_per_weight(capsys):
    code, out, _ = run(["ch", S3, "--cutoff", "6", "--per-weight"], capsys)
    assert code == 0
    assert "[" in out  # weight breakdown shown


def test_cohomology_of_base(capsys):
    code, out, _ = run(["cohomology", S2, "--cutoff", "5"], capsys)
    assert code == 0
    dims = [int(line.split()[2]) for line in out.splitlines()
            if line.strip().startswith(tuple("0123456789"))]
    assert dims == [1, 0, 1, 0, 0, 0]


def test_euler(capsys):
    code, out, _ = run(["euler", S3, "--cutoff", "8", "--json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["chiH"]["0"]["value"] == 0
    assert doc["chiH"]["0"]["certified"]


def test_check_passes(capsys):
    code, out, _ = run(["check", S2, "--cutoff", "8"], capsys)
    assert code == 0
    lines = [ln for ln in out.splitlines() if ln]
    assert len(lines) == 7
    assert all(ln.startswith("PASS") for ln in lines)


def test_finite_input_goes_through_model(capsys):
    code, out, _ = run(["hh", S2H, "--cutoff", "8"], capsys)
    assert code == 0
    assert "model generators" in out


def test_minimal_model_emit_roundtrip(tmp_path, capsys):
    out_file = tmp_path / "model.json"
    code, out, _ = run(
        ["minimal-model", S2H, "--cutoff", "10", "--emit", str(out_file)],
        capsys,
    )
    assert code == 0
    assert out_file.exists()
    reparsed = cli.load_algebra(str(out_file))
    assert verify_minimal(reparsed, 10)["pass"]


def test_verify_minimal_command(capsys):
    code, out, _ = run(["verify-minimal", S2, "--cutoff", "10"], capsys)
    assert code == 0
    assert "PASS" in out


def test_float_coefficient_rejected(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "generators": [{"name": "x", "degree": 2}, {"name": "y", "degree": 3}],
        "differential": {"y": [{"coeff": 0.5,
                                "monomial": [["x", 2]]}]},
    }))
    code, _, err = run(["hh", str(bad)], capsys)
    assert code == 2
    assert "float" in err


def test_bad_coefficient_string_rejected(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "generators": [{"name": "x", "degree": 2}, {"name": "y", "degree": 3}],
        "differential": {"y": [{"coeff": "1.5",
                                "monomial": [["x", 2]]}]},
    }))
    code, _, err = run(["hh", str(bad)], capsys)
    assert code == 2
    assert "coefficient" in err


def test_unknown_field_rejected(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "generators": [{"name": "x", "degree": 3}],
        "tolerance": 1,
    }))
    code, _, err = run(["hh", str(bad)], capsys)
    assert code == 2
    assert "unknown fields" in err


def test_degree_one_needs_weight_max(tmp_path, capsys):
    circle = tmp_path / "circle.json"
    circle.write_text(json.dumps({
        "generators": [{"name": "t", "degree": 1}],
    }))
    code, _, err = run(["hh", str(circle), "--cutoff", "4"], capsys)
    assert code == 2
    code, out, _ = run(
        ["hh", str(circle), "--cutoff", "4", "--weight-max", "4"], capsys)
    assert code == 0


def test_missing_file(capsys):
    code, _, err = run(["hh", "/nonexistent/algebra.json"], capsys)
    assert code == 2
    assert "cannot read" in err


def test_broken_d_squared_rejected(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "generators": [{"name": "x", "degree": 2},
                       {"name": "y", "degree": 3},
                       {"name": "z", "degree": 4}],
        "differential": {
            "y": [{"coeff": 1, "monomial": [["x", 2]]}],
            "x": [],
            "z": [],
        },
    }))
    # fine: d^2 = 0 here. now make z hit y so d^2(z) = x^2 != 0
    bad.write_text(json.dumps({
        "generators": [{"name": "x", "degree": 2},
                       {"name": "y", "degree": 3},
                       {"name": "z", "degree": 2}],
        "differential": {
            "y": [{"coeff": 1, "monomial": [["x", 2]]}],
            "z": [{"coeff": 1, "monomial": [["y", 1]]}],
        },
    }))
    code, _, err = run(["hh", str(bad)], capsys)
    assert code == 2


def test_trivial_fixture(capsys):
    code, out, _ = run(["hh", TRIV, "--cutoff", "4"], capsys)
    assert code == 0
    dims = [int(line.split()[2]) for line in out.splitlines()
            if line.strip().startswith(tuple("0123456789"))]
    assert dims == [1, 0, 0, 0, 0]
