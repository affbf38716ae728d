import io
import json
import subprocess
import sys
from contextlib import redirect_stdout

import pytest

from planedyn.cli import main

TWO_CYCLE = json.dumps({"P": "x^2", "Q": "y^2 - x"})
SQUARE = json.dumps({"P": "x^2", "Q": "y^2"})
A2_SPLIT = json.dumps({"P": "x^2 - 2*y", "Q": "y^2 - 2*x"})


def run(*argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(list(argv))
    return code, buf.getvalue()


def run_json(*argv):
    code, text = run(*argv)
    return code, json.loads(text)


def test_analyze_two_cycle():
    code, r = run_json("--period-bound", "2", "analyze", TWO_CYCLE)
    assert code == 0
    assert r["skew_product"]["holds"]
    assert [p["point"] for p in r["periodic_points"]["1"]] == ["0", "1", "inf"]
    (pair,) = r["periodic_points"]["2"]
    assert pair["multiplier"] == "4" and pair["point"] == "roots of t^2 + t + 1"


def test_analyze_rejects_irregular_map():
    code, r = run_json("analyze", json.dumps({"P": "x*y", "Q": "y^2"}))
    assert code == 3
    assert not r["regular"] and r["witness"] == "[1:0]"


def test_analyze_leading_forms():
    code, r = run_json("analyze", A2_SPLIT)
    assert code == 0
    assert r["leading_forms"] == ["x^2", "y^2"] and r["infinity_map"] == "t^2"


def test_image_and_orbit():
    code, r = run_json("image", TWO_CYCLE, '"y"')
    assert code == 0 and r["image"] == "x*z - y^2" and r["verified"]
    code, r = run_json("orbit", TWO_CYCLE, json.dumps({"poly": "y"}))
    assert code == 0 and r["degrees"] == [1, 2, 1, 2, 1] and r["verdict"] == "periodic"
    fam = json.dumps({"P": "x^2", "Q": "y^2 + s*x", "field": "Q(s)"})
    code, r = run_json("--steps", "2", "orbit", fam, '"y - s*x"')
    assert code == 0 and r["degrees"] == [1, 2, 4]


def test_find_periodic():
    code, r = run_json("--degree-bound", "1", "--period-bound", "2", "find-periodic", SQUARE)
    assert code == 0 and len(r["entries"]) == 11


def test_resolve():
    code, r = run_json("--depth", "2", "resolve", '"y^2 - x^3"', '"y"')
    assert code == 0
    assert r["trees"][0]["m"] == 2
    assert r["intersection_multiplicity"] == 3


def test_family_audit():
    rec = json.dumps({"P": "x^2", "Q": "y^2 + s*x", "field": "Q(s)", "curve": "y - s*x", "special": [0]})
    code, r = run_json("family-audit", rec)
    assert code == 0
    assert r["degrees"]["generic"]["degrees"] == [1, 2, 4]
    assert r["degrees"]["spot_checks"][-1]["flag"] == "degree drop"
    code, r = run_json("family-audit", SQUARE)
    assert code == 2 and r["error"] == "input"


def test_web():
    web = json.dumps({"poly": "z*k^3 - x*k^2 + y*k - z", "param": "k", "k": 3})
    code, r = run_json("web", web, A2_SPLIT)
    assert code == 0
    assert r["invariant"] and r["factor"] == "8*x^2*y^2*z^2 - 16*x*y*z^4 + 8*z^6"
    assert r["factorization"]["factorizable"] and not r["degenerate"]


def test_verify_examples():
    code, r = run_json("verify-examples")
    assert code == 0 and r["failing"] == []
    assert len(r["examples"]) == 6
    code, r = run_json("--a2-variant", "first", "verify-examples")
    assert code == 1 and r["failing"] == ["a2-line-family"]
    code, r = run_json("--budget-ms", "0", "verify-examples")
    assert code == 4 and all(e["status"] == "skipped" for e in r["examples"])


def test_output_is_byte_identical():
    assert run("verify-examples") == run("verify-examples")
    args = ("--period-bound", "2", "analyze", TWO_CYCLE)
    assert run(*args) == run(*args)


@pytest.mark.parametrize("argv", [
    ("analyze", "{not json"),
    ("analyze", "/no/such/file.json"),
    ("image", TWO_CYCLE),
    ("--period-bound", "0", "analyze", TWO_CYCLE),
    ("--budget-ms", "-1", "analyze", TWO_CYCLE),
    ("analyze", json.dumps({"P": "x^2"})),
    ("analyze", json.dumps({"P": "x^^2", "Q": "y"})),
])
def test_bad_input(argv):
    code, r = run_json(*argv)
    assert code == 2 and r["error"] == "input"


def test_out_file(tmp_path):
    target = tmp_path / "report.json"
    rec = tmp_path / "map.json"
    rec.write_text(TWO_CYCLE)
    code, text = run("--out", str(target), "image", str(rec), '"y"')
    assert code == 0 and text == ""
    assert json.loads(target.read_text())["image"] == "x*z - y^2"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "planedyn", "image", TWO_CYCLE, '"y"'],
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["delta"] == 1
