import io
import json
import subprocess
import sys

import pytest

from sbcubic.cli import VERBS, main, run

FERMAT = [1, 0, 0, 0, 0, 0, 1, 0, 0, 1]


def call(verb, params=None, *flags, capsys):
    code = main([verb, json.dumps(params or {}), *flags])
    lines = capsys.readouterr().out.strip().splitlines()
    return code, [json.loads(l) for l in lines]


def test_verb_list():
    assert set(VERBS) == {"inflections", "ei-table", "heisenberg-roundtrip", "pencil", "j", "stabilizer-scan",
                          "cohomology", "gamma-check", "descent", "curve-cocycle", "prop17", "cor19", "selftest"}


def test_inflections(capsys):
    code, [r] = call("inflections", {"field": {"p": 7, "n": 1}, "cubic": FERMAT}, capsys=capsys)
    assert code == 0 and r["schema"] == "1" and r["ok"]
    assert len(r["result"]["points"]) == 9 and len(r["result"]["triples"]) == 12


def test_deterministic(capsys):
    params = {"field": {"p": 13}, "count": 3}
    _, a = call("heisenberg-roundtrip", params, "--seed", "5", capsys=capsys)
    _, b = call("heisenberg-roundtrip", params, "--seed", "5", capsys=capsys)
    _, c = call("heisenberg-roundtrip", params, "--seed", "6", capsys=capsys)
    assert a == b and a != c and a[0]["ok"]


@pytest.mark.parametrize("verb,params,check", [
    ("ei-table", {"field": {"p": 7}, "cubic": FERMAT}, lambda r: len(r["table"]) == 9),
    ("pencil", {"field": {"p": 13}, "orbits_field": {"p": 13}},
     lambda r: sorted((o["size"], o["smooth"], o["j"]) for o in r["orbits"])
     == [(4, False, None), (4, True, [0]), (6, True, [12])]),
    ("j", {"field": {"p": 7}, "cubic": FERMAT}, lambda r: r["j"] == [0]),
    ("j", {"field": {"p": 7}, "weierstrass": [0, 0, 0, 1, 0]}, lambda r: r["j"] == [1728 % 7]),
    ("cohomology", {"group": "SL2", "bruteforce": True}, lambda r: r["dim"] == 0 and r["bruteforce_dim"] == 0),
    ("cohomology", {"group": "translations"}, lambda r: r["dim"] == 4),
    ("gamma-check", {}, lambda r: r["Aff"]["unique"] and r["SAff"]["unique"]),
    ("descent", {"base": {"p": 5}, "weierstrass": [0, 0, 0, 1, 1]}, lambda r: len(r["curve"]) == 10),
    ("curve-cocycle", {"field": {"p": 5}, "cubic": FERMAT, "flex": 4}, lambda r: r["is_cocycle"]),
    ("prop17", {"level": 1, "algebra": {"a": [1, 0], "b": [0, 1]}, "K": [0, 1]}, lambda r: r["exists"]),
    ("prop17", {"level": 2, "algebra": {"a": [1, 0, 0], "b": [0, 1, 0]}, "K": [0, 0, 1]},
     lambda r: r["exists"] is False and len(r["table"]) == 26),
    ("cor19", {"D": {"a": [1, 0], "b": [0, 1]}}, lambda r: r["exists"] is False),
    ("cor19", {"D": {"a": [1, 0], "b": [0, 1]}, "K": {"kind": "ramified", "d": 3}}, lambda r: r["exists"] is False),
])
def test_verbs(verb, params, check, capsys):
    code, [r] = call(verb, params, capsys=capsys)
    assert code == 0 and r["ok"], r
    assert check(r["result"])


def test_unknown_verb_rejected_before_work(capsys, monkeypatch):
    ran = []
    monkeypatch.setattr("sbcubic.cli.run", lambda *a, **k: ran.append(a))
    monkeypatch.setattr(sys, "stdin", io.StringIO('{"verb": "j", "field": {"p": 7}, "cubic": [1,0,0,0,0,0,1,0,0,1]}\n'
                                                  '{"verb": "frobnicate"}\n'))
    assert main([]) == 2
    assert not ran
    out = json.loads(capsys.readouterr().out)
    assert out["error"]["type"] == "UnknownVerb"


def test_jsonl_stdin(capsys, monkeypatch):
    lines = [{"verb": "j", "field": {"p": 7}, "cubic": FERMAT}, {"verb": "cohomology", "group": "cyclic", "n": 3,
                                                                "module": "trivial"}]
    monkeypatch.setattr(sys, "stdin", io.StringIO("\n".join(json.dumps(l) for l in lines)))
    assert main([]) == 0
    outs = [json.loads(l) for l in capsys.readouterr().out.splitlines()]
    assert [o["verb"] for o in outs] == ["j", "cohomology"] and outs[1]["result"]["dim"] == 2


@pytest.mark.parametrize("doc", [
    {"verb": "inflections", "field": {"p": 7}},
    {"verb": "inflections", "field": {"p": 9}, "cubic": FERMAT},
    {"verb": "inflections", "field": {"p": 7}, "cubic": [1, 2, 3]},
    {"verb": "j", "field": {"p": 7}, "cubic": [0, 0, 0, 0, 1, 0, 0, 0, 0, 0]},  # singular
    {"verb": "prop17", "level": 1, "algebra": {"a": [1, 0], "b": [0, 1]}, "K": [0, 0]},
    {"verb": "cohomology", "group": "mystery"},
    {"verb": "stabilizer-scan"},
])
def test_invalid_input_exit_2(doc):
    report, code = run(doc)
    assert code == 2 and not report["ok"] and report["error"]["code"] == 2


def test_bad_json(capsys):
    assert main(["j", "{not json"]) == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "sbcubic", "j", json.dumps({"field": {"p": 7}, "cubic": FERMAT})],
                         capture_output=True, text=True, check=False)
    assert out.returncode == 0
    assert json.loads(out.stdout)["result"]["j"] == [0]
