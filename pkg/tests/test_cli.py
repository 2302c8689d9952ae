import io
import json
import subprocess
import sys

import pytest

from hotkit.boolfn import BoolFn
from hotkit.catalog import TERMS, adapter_pm, f_ns
from hotkit.cli import COMB, run
from hotkit.mobius import transform

F_NS = "(A2 -> A1) * (A4 -> A3)"
A1 = "~(~((A1 -> A2) * (A3 -> A4)) * ((A5 -> A6) * (A7 -> A8)))"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call(*argv, "--json")
    assert code == 0, err
    return json.loads(out)


# --- parse / analyze ---------------------------------------------------------------

def test_parse_text_and_json():
    code, out, _ = call("parse", "--term", "A2 -> A1")
    assert code == 0
    assert out.splitlines() == ["A2 -> A1", "1 - p{1} + p{1,2}"]
    data = call_json("parse", "--term", "A2 -> A1")
    assert data["expansion"] == "1 - p{1} + p{1,2}" and data["n"] == 2


def test_parse_error_reports_position():
    code, _, err = call("parse", "--term", "A1 * * A2")
    assert code == 1 and "error" in err


def test_analyze_f_ns():
    code, out, _ = call("analyze", "--term", F_NS)
    assert code == 0
    assert "2 maximal chains" in out
    assert "no signalling: 2->3, 4->1" in out
    data = call_json("analyze", "--term", F_NS)
    assert data["poset"]["maximal_chains"] == 2
    pairs = {(p["i"], p["j"]): p["signals"] for p in data["signalling"]["pairs"]}
    assert pairs[(2, 3)] is False and pairs[(2, 1)] is True
    assert data["inputs"] == [2, 4] and data["outputs"] == [1, 3]
    assert set(data["checks"].values()) == {"pass"}


def test_analyze_marks_combs():
    data = call_json("analyze", "--term", TERMS["comb2"])
    assert data["structure"] == COMB and data["chain_type"] is True
    _, out, _ = call("analyze", "--term", TERMS["comb2"])
    assert COMB in out
    assert call_json("analyze", "--term", F_NS)["structure"] != COMB


def test_analyze_a1_inputs():
    data = call_json("analyze", "--term", A1)
    assert data["inputs"] == [1, 3, 6, 8]
    _, out, _ = call("analyze", "--term", A1)
    assert "inputs:     {1,3,6,8}" in out


def test_analyze_non_type(tmp_path):
    p = tmp_path / "f.json"
    p.write_text(json.dumps({"n": 2, "support": ["00", "11"]}))
    code, out, _ = call("analyze", "--fn", str(p))
    assert code == 0
    assert "kind:       not a regular subtype" in out
    assert "2*p{1,2}" in out and "signalling" not in out


def test_fn_file_formats(tmp_path):
    f = f_ns()
    forms = {
        "support": {"n": 4, "support": f.support_strings()},
        "coeffs": transform(f).to_json(),
        "term": {"term": F_NS},
        "wrapped": {"fn": f.to_json()},
    }
    for name, data in forms.items():
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(data))
        got = call_json("parse", "--fn", str(p))
        assert BoolFn.from_json(got["fn"]) == f, name


def test_fn_from_stdin(monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO(json.dumps({"term": "A2 -> A1"})))
    code, out, _ = call("parse", "--fn", "-")
    assert code == 0 and "1 - p{1} + p{1,2}" in out


def test_bad_fn_file(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert call("parse", "--fn", str(p))[0] == 1
    assert call("parse", "--fn", str(tmp_path / "missing.json"))[0] == 1
    p.write_text(json.dumps({"n": 2, "support": ["01"]}))
    assert call("parse", "--fn", str(p))[0] == 1


# --- enumeration ----------------------------------------------------------------------

def test_enumerate_types_counts():
    for n, count in ((1, 2), (2, 6), (3, 26), (4, 174)):
        assert call_json("enumerate-types", "--n", str(n))["count"] == count
    data = call_json("enumerate-types", "--n", "4", "--outputs", "1,3")
    assert data["count"] == sum(1 for t in data["types"] if t["outputs"] == [1, 3])
    assert sum(t["chain_type"] for t in data["types"]) == 14


def test_enumerate_types_guard():
    code, _, err = call("enumerate-types", "--n", "6")
    assert code == 1 and "HOTKIT_MAX_N" in err


def test_enumerate_regular():
    data = call_json("enumerate-regular", "--n", "4", "--outputs", "1,3")
    assert data["count"] == 50 and data["chain_types"] == 14
    assert sorted(data["basic_strings"]) == sorted(["1100", "1001", "0110", "0011", "1101", "0111"])
    code, out, _ = call("enumerate-regular", "--n", "3", "--outputs", "1,3", "--members")
    assert code == 0 and "5 regular subtypes" in out and "members:" in out
    assert call("enumerate-regular", "--n", "5", "--outputs", "1,3")[0] == 1


# --- signalling / hasse / normal form -----------------------------------------------

def test_signalling_output():
    code, out, _ = call("signalling", "--term", F_NS)
    assert code == 0 and out.splitlines()[0].split() == ["in\\out", "1", "3"]
    data = call_json("signalling", "--term", TERMS["f_pm"])
    assert {(p["i"], p["j"]) for p in data["pairs"] if p["signals"]} == {(2, 3), (4, 1)}


def test_signalling_refuses_non_regular(tmp_path):
    p = tmp_path / "f.json"
    p.write_text(json.dumps({"n": 2, "support": ["00", "11"]}))
    assert call("signalling", "--fn", str(p))[0] == 1


def test_hasse_dot_for_f_pm():
    code, out, _ = call("hasse", "--term", TERMS["f_pm"], "--dot")
    assert code == 0 and out.startswith("digraph")
    edges = [line for line in out.splitlines() if "->" in line]
    assert len(edges) == 2  # reduced poset: two disjoint two-element chains


def test_hasse_text_and_json():
    code, out, _ = call("hasse", "--term", F_NS)
    assert code == 0 and "rank 0" in out
    full = call_json("hasse", "--term", F_NS, "--full")
    assert len(full["elements"]) == 9


def test_hasse_refuses_non_types(tmp_path):
    p = tmp_path / "f.json"
    p.write_text(json.dumps({"n": 2, "support": ["00", "11"]}))
    assert call("hasse", "--fn", str(p))[0] == 1


def test_normal_form():
    code, out, _ = call("normal-form", "--term", F_NS)
    assert code == 0 and "∧" in out and "minimax" in out
    data = call_json("normal-form", "--term", A1)
    assert data["shape"] == "join-of-meets" and data["n"] == 8
    assert data["minimax"] in ("holds", "fails", "not-a-grid")
    from hotkit.normalform import NormalForm, eval_normal_form
    assert eval_normal_form(NormalForm.from_json(data)) == adapter_pm()


# --- verify / choi ------------------------------------------------------------------------

def test_verify_selected_suites():
    code, out, _ = call("verify", "--suite", "counts", "--suite", "golden")
    assert code == 0
    assert all(line.startswith("PASS") for line in out.splitlines()[:-1])
    data = call_json("verify", "--suite", "counts")
    assert data["ok"] is True and data["checks"][0]["failed"] == 0


def test_verify_unknown_suite():
    assert call("verify", "--suite", "nope")[0] == 1


def test_choi_verify():
    code, out, _ = call("choi-verify", "--n", "2")
    assert code == 0 and "mobius bridge" in out
    data = call_json("choi-verify", "--dims", "2,3", "--term", "A2 -> A1")
    assert data["ok"] is True and data["dims"] == [2, 3]
    assert call("choi-verify", "--n", "2", "--all-types", "--term", "A2 -> A1")[0] == 1
    assert call("choi-verify", "--dims", "2,2", "--term", F_NS)[0] == 1
    assert call("choi-verify")[0] == 1
    assert call("choi-verify", "--dims", "2,x")[0] == 1
    # an impossible tolerance fails as a check, not as a usage error
    assert call("choi-verify", "--n", "2", "--tolerance", "-1")[0] == 2


# --- exit codes and determinism ---------------------------------------------------------

def test_usage_errors_exit_one():
    assert call()[0] == 1
    assert call("frobnicate")[0] == 1
    assert call("parse", "--bogus")[0] == 1
    assert call("enumerate-types")[0] == 1
    assert call("parse")[0] == 1


@pytest.mark.parametrize("argv", [
    ["analyze", "--term", A1],
    ["analyze", "--term", A1, "--json"],
    ["normal-form", "--term", A1, "--json"],
    ["hasse", "--term", A1, "--dot"],
    ["enumerate-regular", "--n", "4", "--outputs", "1,3", "--json", "--members"],
])
def test_byte_identical_output(argv):
    assert call(*argv)[1] == call(*argv)[1]


def test_json_round_trip():
    data = call_json("analyze", "--term", A1)
    assert json.loads(json.dumps(data, sort_keys=True)) == data
    assert BoolFn.from_json(data["input"]["fn"]) == adapter_pm()


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "hotkit", "parse", "--term", "A2 -> A1"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0 and r.stdout.strip().endswith("1 - p{1} + p{1,2}")
    r = subprocess.run([sys.executable, "-m", "hotkit", "nope"], capture_output=True, text=True, check=False)
    assert r.returncode == 1
