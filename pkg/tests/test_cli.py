from __future__ import annotations

import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from eqhitchin.cli import main

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def cfg(name):
    return str(CONFIGS / name)


def test_derive_sample():
    code, text = run("derive", "--config", cfg("sample_p3.json"), "--format", "json")
    assert code == 0
    rep = json.loads(text)
    assert rep["quotient_genus"] == 0
    assert len(rep["points"]) == 4
    assert rep["points"][0] == {"label": "x1", "n": 1, "alpha_exp": 0, "m": 2, "b": 0, "k": 1, "sqrt_exp": 0}
    assert rep["fixed_point_data"]["l0"] == 0


def test_derive_table():
    code, text = run("derive", "--config", cfg("sample_p3.json"))
    assert code == 0
    assert "quotient genus = 0" in text
    assert sum(line.startswith("x") for line in text.splitlines()) == 4


def test_derive_galois_config():
    code, text = run("derive", "--config", cfg("galois.json"), "--format", "json")
    # chi = p chi~: -6 = 3 (2 - 2 g~)
    assert code == 0 and json.loads(text)["quotient_genus"] == 2


def test_inconsistent_config(capsys):
    code, _ = run("derive", "--config", cfg("inconsistent.json"))
    assert code == 2
    assert "Hurwitz relation" in capsys.readouterr().err


def test_config_errors(tmp_path):
    assert run("derive")[0] == 2
    assert run("derive", "--config", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("derive", "--config", str(bad))[0] == 2
    assert run("verify", "--suite", "nope")[0] == 2
    assert run("bogus")[0] == 2
    assert run("index", "--config", cfg("sample_p3.json"), "--depth", "0")[0] == 2


def test_components_one_point():
    code, text = run("components", "--config", cfg("one_point.json"), "--format", "json")
    assert code == 0
    lines = [json.loads(s) for s in text.splitlines()]
    assert [e["i"] for e in lines] == [{"x": 0}, {"x": 1}]
    assert [e["n_components"] for e in lines] == [0, 1]
    comp = lines[1]["components"][0]
    assert (comp["c"], comp["j"], comp["l_j"], comp["eps"], comp["D_ij"], comp["c_ij_ok"]) == \
        (1, {"x": 1}, 0, {"x": -1}, ["x"], True)


def test_components_deterministic():
    a = run("components", "--config", cfg("sample_p3.json"), "--format", "json")[1]
    b = run("components", "--config", cfg("sample_p3.json"), "--format", "json")[1]
    assert a == b and a
    assert run("components", "--config", cfg("sample_p3.json"))[1] == run("components", "--config", cfg("sample_p3.json"))[1]


def test_components_tuple_and_limit():
    # CSV entries follow the canonical point order printed by derive: x1, x2, x4, x3
    code, text = run("components", "--config", cfg("sample_p3.json"), "--format", "json", "--tuple", "1,0,1,0",
                     "--tuple", "0,0,0,0")
    assert code == 0
    assert [json.loads(s)["i"] for s in text.splitlines()] == [
        {"x1": 1, "x2": 0, "x4": 1, "x3": 0}, {"x1": 0, "x2": 0, "x3": 0, "x4": 0}]
    code, text = run("components", "--config", cfg("sample_p3.json"), "--format", "json", "--limit", "3")
    assert len(text.splitlines()) == 3
    assert run("components", "--config", cfg("sample_p3.json"), "--tuple", "1,x")[0] == 2
    assert run("components", "--config", cfg("sample_p3.json"), "--tuple", "1,0")[0] == 2


def test_seifert():
    code, text = run("seifert", "--config", cfg("sample_p3.json"), "--format", "json")
    rep = json.loads(text)
    assert code == 0
    assert rep["seifert"]["genus"] == 0
    assert len(rep["seifert"]["pairs"]) == 4
    code, text = run("seifert", "--config", cfg("sample_p3.json"))
    assert text.startswith("(b, g~, pairs) = (")


def test_index_points():
    code, text = run("index", "--config", cfg("index_points.json"))
    assert code == 0
    assert "constant term: 1 + ζ" in text
    rep = json.loads(run("index", "--config", cfg("index_points.json"), "--format", "json")[1])
    assert rep["constant_term"] == ["1/1", "1/1"] and rep["pure"] is False


def test_index_p1_toy():
    rep = json.loads(run("index", "--config", cfg("p1_toy.json"), "--format", "json")[1])
    assert rep["pure"] is True
    assert [(t["t"], t["rational"]) for t in rep["terms"]] == [(0, "4/3"), (-3, "10/3"), (-6, "16/3")]


def test_index_parallel_matches_serial():
    a = run("index", "--config", cfg("sample_p3.json"), "--format", "json")[1]
    b = run("index", "--config", cfg("sample_p3.json"), "--format", "json", "--jobs", "2")[1]
    assert a == b


def test_index_needs_components():
    assert run("index", "--config", cfg("one_point.json"))[0] == 2


def test_integrand():
    code, text = run("integrand", "--config", cfg("p1_toy.json"), "--format", "json", "--depth", "3")
    rep = json.loads(text)
    assert code == 0 and rep["components"][0]["root_data"]["nu"] == 0


def test_galois_check_commands():
    assert run("galois-check", "--config", cfg("galois.json"))[0] == 0
    code, text = run("galois-check", "--config", cfg("galois_corrupted.json"))
    assert code == 1 and "FAIL" in text and "first mismatch" in text
    assert run("galois-check", "--config", cfg("sample_p3.json"))[0] == 2


def test_verify_suites():
    code, text = run("verify", "--suite", "cyclotomic", "--p", "7")
    assert code == 0 and "p=7 u=1..6" in text
    code, text = run("verify", "--config", cfg("galois_corrupted.json"), "--suite", "galois")
    assert code == 1 and "FAIL" in text and "first_mismatch" in text
    code, text = run("verify", "--config", cfg("sample_p3.json"), "--suite", "assembly", "--format", "json")
    assert code == 0 and json.loads(text)["ok"] is True


def test_verify_all_on_sample_config():
    code, text = run("verify", "--config", cfg("sample_p3.json"))
    assert code == 0, text


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "eqhitchin.cli", "derive", "--config", cfg("inconsistent.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 2
