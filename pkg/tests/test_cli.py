import json
import subprocess
import sys

import pytest
from hypothesis import HealthCheck, assume, given, settings

from conftest import pairs
from ellsurf.cli import run
from ellsurf.kodaira import configuration
from ellsurf.mwlattice import rank_bound
from ellsurf.qpoly import format_poly, from_coefficient_strings
from ellsurf.weierstrass import WeierstrassPair, classify_membership, detect_trivial, frame

FAMILY = ["--A", "0", "--B", "-7*t^6 + 2*t^3 + 1", "--m", "4", "--n", "6"]


def call(capsys, *argv):
    code = run(list(argv))
    return code, capsys.readouterr().out


def call_json(capsys, *argv):
    code, out = call(capsys, *argv, "--json")
    return code, json.loads(out)


def test_analyze_json(capsys):
    code, doc = call_json(capsys, "analyze", "--A", "t", "--B", "1", "--m", "1", "--n", "1")
    assert code == 0
    assert set(doc) == {
        "input", "frame", "membership", "invariants", "places", "configuration", "trivial_lattice", "rank_bound",
    }
    assert doc["rank_bound"] == 1
    conf = {(e["type"], e["multiplicity"]) for e in doc["configuration"]}
    assert conf == {("I1", 3), ("III*", 1)}
    assert doc["frame"] == {"k": 1, "alpha": 3, "beta": 5, "s_tr": 0}
    assert doc["membership"]["status"] == "U"
    assert doc["trivial_lattice"]["rank"] == 9 and doc["trivial_lattice"]["det"] == 2
    assert doc["places"][-1]["place"] == "inf" and doc["places"][-1]["fiber"] == "III*"
    assert doc["places"][0]["place"] == ["27/4", "0", "0", "1"]


def test_analyze_text(capsys):
    code, out = call(capsys, "analyze", "--A", "t", "--B", "1", "--m", "1", "--n", "1")
    assert code == 0
    assert "I1 x3" in out and "III* x1" in out and "rank bound: 1" in out


def test_twist(capsys):
    code, out = call(capsys, "twist", "--A", "t", "--B", "1", "--m", "1", "--n", "1", "--d", "2")
    assert code == 0
    assert out.splitlines() == ["A = 4*t", "B = 8"]
    code, doc = call_json(capsys, "twist", "--A", "t", "--B", "1", "--m", "1", "--n", "1", "--d", "2", "--probe", "2,-1,4")
    assert (doc["A"], doc["B"]) == (["0", "4"], ["8"])
    assert doc["twists"] == [
        {"d": 2, "in_U": True, "isomorphic": False},
        {"d": -1, "in_U": True, "isomorphic": False},
        {"d": 4, "in_U": True, "isomorphic": True},
    ]


def test_twist_detect(capsys):
    base = ["twist-detect", "--A", "t", "--B", "1", "--m", "1", "--n", "1"]
    code, doc = call_json(capsys, *base, "--A2", "9*t", "--B2", "27")
    assert code == 0 and doc["twist"] == {"d": "3", "class": 3, "ambiguous": False}
    code, doc = call_json(capsys, *base, "--A2", "4*t", "--B2", "27")
    assert code == 0 and doc["twist"] is None


def test_not_elliptic_exits_one(capsys):
    code, out = call(capsys, "analyze", "--A", "-3", "--B", "2", "--m", "1", "--n", "1")
    assert code == 1
    assert len(out.splitlines()) == 1
    rec = json.loads(out)
    assert set(rec) == {"error", "message"} and rec["error"] == "not_in_S"


def test_constant_nonsingular_pair_is_a_trivial_surface(capsys):
    # "-3+2" is the constant -1, so D = 27 and the pair is a (trivial) S-member
    code, doc = call_json(capsys, "analyze", "--A", "0", "--B", "-3+2", "--m", "1", "--n", "1")
    assert code == 0
    assert doc["membership"]["trivial"] == {"lambda": "0", "mu": "-1", "u": ["1"]}
    assert doc["rank_bound"] is None


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["analyze", "--A", "t", "--m", "1", "--n", "1"],
        ["analyze", "--A", "t +", "--B", "1", "--m", "1", "--n", "1"],
        ["analyze", "--A", "t^2", "--B", "1", "--m", "1", "--n", "1"],
        ["analyze", "--A", "t", "--B", "1", "--m", "x", "--n", "1"],
        ["twist", "--A", "t", "--B", "1", "--m", "1", "--n", "1", "--d", "0"],
        ["sample", "--m", "1", "--n", "1", "--bound", "3/2"],
        ["mahler", "--poly", "t^"],
    ],
)
def test_usage_errors_exit_two(capsys, argv):
    code, out = call(capsys, *argv)
    assert code == 2
    assert json.loads(out.strip().splitlines()[-1])["error"] == "usage"


def test_domain_errors_exit_one(capsys):
    code, out = call(capsys, "height", *FAMILY, "--x", "2*t^2", "--y", "t^3")
    assert code == 1 and json.loads(out)["error"] == "NotOnCurve"
    code, out = call(capsys, "torsion-bound", "--A", "-3", "--B", "2 + t^2", "--m", "1", "--n", "2", "--t0", "0", "--primes", "5")
    assert code == 1 and json.loads(out)["error"] == "BadSpecialization"
    code, out = call(capsys, "mahler", "--poly", "0")
    assert code == 1


def test_height_and_torsion(capsys):
    code, out = call(capsys, "height", *FAMILY, "--x", "2*t^2", "--y", "t^3 + 1")
    assert code == 0 and "height = 2 (infinite order)" in out
    code, doc = call_json(capsys, "height", "--A", "t", "--B", "0", "--m", "1", "--n", "1", "--x", "0", "--y", "0")
    assert doc["height"]["exact"] and doc["height"]["lower"] == "0"
    assert sorted(c["type"] for c in doc["height"]["contributions"]) == ["III", "III*"]
    code, doc = call_json(capsys, "height", "--A", "2", "--B", "t^2", "--m", "1", "--n", "2", "--x", "1/t^2", "--y", "(t^4 + 1)/(t^3)")
    assert code == 0 and doc["height"]["lower"] == "8/3"
    code, doc = call_json(capsys, "torsion-bound", *FAMILY, "--t0", "1", "--primes", "5,7,11,13")
    assert doc["torsion"] == {"t0": "1", "bound": 1, "counts": {"5": 6, "7": 13, "11": 12, "13": 21}, "skipped": []}


def test_mahler(capsys):
    code, doc = call_json(capsys, "mahler", "--poly", "t^2 - 2")
    assert code == 0
    assert abs(doc["mahler"]["value"] - 2) < 1e-9 and doc["mahler"]["tol"] < 1e-9
    assert doc["poly"] == ["-2", "0", "1"]


def test_sample_summary_and_records(capsys, tmp_path):
    out_file = tmp_path / "pairs.jsonl"
    argv = ["sample", "--m", "2", "--n", "2", "--bound", "4", "--count", "40", "--seed", "5"]
    code, first = call(capsys, *argv, "--out", str(out_file))
    assert code == 0
    summary = json.loads(first)
    assert summary["report"]["total"] == 40
    assert summary["spec"] == {"m": 2, "n": 2, "bound": "4", "measure": "naive", "mode": "sample", "count": 40, "seed": 5}
    lines = out_file.read_text().splitlines()
    assert len(lines) == 40
    for line in lines:
        rec = json.loads(line)
        p = WeierstrassPair(
            from_coefficient_strings(rec["input"]["A"]), from_coefficient_strings(rec["input"]["B"]), 2, 2
        )
        assert rec["membership"]["status"] == classify_membership(p).status
    code, again = call(capsys, *argv)
    assert again == first


def test_sample_exhaustive_mode(capsys):
    code, out = call(capsys, "sample", "--m", "1", "--n", "1", "--bound", "1")
    doc = json.loads(out)
    assert doc["report"]["total"] == 81 and doc["report"]["not_in_S"] == 1
    assert doc["spec"]["mode"] == "exhaustive"


@settings(max_examples=25, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(pairs(bound=5))
def test_report_round_trip_and_reproducibility(capsys, p):
    assume(p.D)
    code, doc = call_json(
        capsys, "analyze", "--A", format_poly(p.A), "--B", format_poly(p.B), "--m", str(p.m), "--n", str(p.n)
    )
    assert code == 0
    A = from_coefficient_strings(doc["input"]["A"])
    B = from_coefficient_strings(doc["input"]["B"])
    assert (A, B) == (p.A, p.B)
    q = WeierstrassPair(A, B, doc["input"]["m"], doc["input"]["n"])
    fr = frame(q)
    assert doc["frame"] == {"k": fr.k, "alpha": fr.alpha, "beta": fr.beta, "s_tr": fr.s_tr}
    assert doc["membership"]["status"] == classify_membership(q).status
    conf = configuration(q)
    assert [(e["type"], e["multiplicity"]) for e in doc["configuration"]] == [
        (e.fiber.name, e.multiplicity) for e in conf.entries
    ]
    if detect_trivial(q) is None and doc["rank_bound"] is not None:
        assert doc["rank_bound"] == rank_bound(q)
    # canonical output: same bytes on a second run
    code, again = call(capsys, "analyze", "--A", format_poly(p.A), "--B", format_poly(p.B), "--m", str(p.m), "--n", str(p.n), "--json")
    assert json.loads(again) == doc


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "ellsurf", "analyze", "--A", "t^4", "--B", "1", "--m", "4", "--n", "6", "--json"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert res.returncode == 0
    assert json.loads(res.stdout)["rank_bound"] == 8
