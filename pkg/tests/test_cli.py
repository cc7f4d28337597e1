import json
import subprocess
import sys

import pytest

from maxdim import __version__
from maxdim.cli import main

STATUSES = {"exact", "lower_bound", "fail", "skipped"}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--json")
    return code, json.loads(out)


def strip_timing(obj):
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k != "elapsed_ms"}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


def check_schema(rep):
    assert rep["tool"] == "maxdim" and rep["version"] == __version__
    assert isinstance(rep["command"], list)
    assert rep["status"] in STATUSES
    assert isinstance(rep["elapsed_ms"], float)
    for v in rep.get("invariants", {}).values():
        assert set(v) == {"value", "status", "certificate", "elapsed_ms"}
        assert v["status"] in STATUSES


@pytest.mark.parametrize("spec,values", [("sym:3", (2, 2, 2)), ("cyclic:1", (0, 0, 0)),
                                         ("gqp:2,3", (3, 3, 4))])
def test_invariants(capsys, spec, values):
    code, rep = run_json(capsys, "invariants", "--group", spec, "--which", "all")
    assert code == 0
    check_schema(rep)
    assert rep["group"] == spec
    inv = rep["invariants"]
    assert (inv["m"]["value"], inv["md"]["value"], inv["i"]["value"]) == values
    assert all(v["status"] == "exact" for v in inv.values())


def test_invariants_text_output(capsys):
    code, out = run(capsys, "invariants", "--group", "sym:3", "--which", "m")
    assert code == 0
    assert "m   = 2  [exact]" in out


def test_invariants_chief_mode(capsys):
    code, rep = run_json(capsys, "invariants", "--group", "sym:4", "--which", "m", "--mode", "chief")
    assert code == 0 and rep["invariants"]["m"]["value"] == 3


def test_invariants_timeout_gives_partial(capsys):
    code, rep = run_json(capsys, "invariants", "--group", "direct(sym:4,sym:3)", "--which", "m",
                         "--timeout", "1e-9")
    assert code == 2
    assert rep["invariants"]["m"]["status"] == "lower_bound"


def test_invariants_cap_gives_partial(capsys):
    code, rep = run_json(capsys, "invariants", "--group", "sym:6", "--which", "m")
    assert code == 2
    check_schema(rep)
    assert rep["status"] == "skipped" and "CapExceeded" in rep["error"]


def test_invariants_bad_spec(capsys):
    code, rep = run_json(capsys, "invariants", "--group", "cyclc:3")
    assert code == 1
    assert rep["status"] == "fail" and "SpecError" in rep["error"]


def test_gqp_precondition(capsys):
    code, rep = run_json(capsys, "gqp", "--p", "3", "--q", "5")
    assert code == 1 and rep["status"] == "fail"


def test_gqp_family(capsys):
    code, rep = run_json(capsys, "gqp", "--p", "5", "--q", "11", "--compute", "family")
    assert code == 0
    check_schema(rep)
    fam = rep["invariants"]["family"]
    assert fam["value"] == 5 and len(fam["certificate"]["witnesses"]) == 5


def test_gqp_md_exact(capsys):
    code, rep = run_json(capsys, "gqp", "--p", "3", "--q", "7", "--compute", "md")
    assert code == 0
    assert rep["invariants"]["md"]["value"] == 3
    assert rep["invariants"]["md"]["status"] == "exact"


def test_verify(capsys):
    code, rep = run_json(capsys, "verify", "chain", "--max-order", "12")
    assert code == 0
    check_schema(rep)
    assert rep["violations"] == 0 and rep["checked"] == len(rep["checks"]) > 5
    assert all(c["status"] == "pass" for c in rep["checks"])


def test_verify_text(capsys):
    code, out = run(capsys, "verify", "thm1", "--max-order", "8")
    assert code == 0
    assert out.strip().splitlines()[-1].startswith("thm1:")


def test_reports_are_deterministic_modulo_timing(capsys):
    argv = ("invariants", "--group", "dihedral:6", "--which", "all")
    a = run_json(capsys, *argv)[1]
    b = run_json(capsys, *argv)[1]
    assert strip_timing(a) == strip_timing(b)
    a = run_json(capsys, "verify", "remark-m2", "--max-order", "16")[1]
    b = run_json(capsys, "verify", "remark-m2", "--max-order", "16", "--threads", "2")[1]
    assert strip_timing(a)["checks"] == strip_timing(b)["checks"]


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "maxdim", "--version"], capture_output=True,
                         text=True, check=True)
    assert out.stdout.strip() == __version__
    res = subprocess.run([sys.executable, "-m", "maxdim", "invariants", "--group", "sym:3",
                          "--which", "m"], capture_output=True, text=True)
    assert res.returncode == 0
