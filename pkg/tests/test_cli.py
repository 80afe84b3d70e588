import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from compomat.cli import main
from compomat.documents import load_schema

HERE = Path(__file__).parent
DATA = HERE / "data"
GOLDEN = HERE / "golden"
FIXTURES = [("crystalline:default", "crystalline"), ("pair:3", "pair3"), ("triclinic:search", "triclinic")]


def run(*args):
    return subprocess.run([sys.executable, "-m", "compomat", *map(str, args)], capture_output=True, text=True)


@pytest.mark.parametrize("fixture,stem", FIXTURES)
def test_golden_reports(fixture, stem):
    from_file = run("classify", GOLDEN / f"{stem}.body.json", "--format", "json")
    assert from_file.returncode == 0, from_file.stderr
    assert from_file.stdout == (GOLDEN / f"{stem}.report.json").read_text()
    assert run("classify", fixture, "--json").stdout == from_file.stdout


@pytest.mark.parametrize("stem", [s for _, s in FIXTURES])
def test_golden_reports_validate(stem):
    jsonschema.validate(json.loads((GOLDEN / f"{stem}.report.json").read_text()), load_schema("report"))


def test_emit_schema():
    out = run("--emit-schema")
    assert out.returncode == 0 and json.loads(out.stdout) == load_schema("report")
    assert json.loads(run("--emit-schema", "body").stdout) == load_schema("body")


@pytest.mark.parametrize(
    "args,code,error",
    [
        (["classify", DATA / "loose_tolerance.json"], 1, "E_NOT_CLOSED"),
        (["classify", DATA / "orbit_sorted.json", "--cap", "2"], 1, "E_CLOSURE"),
        (["classify", DATA / "object_mismatch.json"], 2, "E_OBJECT_MISMATCH"),
        (["classify", DATA / "missing.json"], 2, "E_"),
        (["classify", "hexagonal:default"], 2, "E_"),
        (["classify", "crystalline:default", "--tol", "abc"], 2, ""),
        (["frobnicate"], 2, ""),
        ([], 2, ""),
    ],
)
def test_exit_codes(args, code, error):
    out = run(*args)
    assert out.returncode == code, out.stderr
    assert error in out.stderr


def test_tolerance_override_rescues_extraction():
    out = run("classify", DATA / "loose_tolerance.json", "--tol", "0", "--format", "json")
    assert out.returncode == 0 and json.loads(out.stdout)["sizes"]["omega1"] == 1


def test_env_cap(monkeypatch, capsys):
    monkeypatch.setenv("COMPOMAT_CAP", "2")
    assert main(["core", str(DATA / "orbit_sorted.json")]) == 1
    assert "error [" in capsys.readouterr().err


def test_axioms_command(capsys):
    assert main(["axioms", "pair:3", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert [g["passed"] for g in payload["groupoids"]] == [True, True]
    assert main(["axioms", str(DATA / "object_mismatch.json")]) == 0
    assert "left: passed" in capsys.readouterr().out


def test_core_and_intersect(capsys):
    assert main(["core", "crystalline:default", "--format", "json"]) == 0
    core = json.loads(capsys.readouterr().out)
    assert len(core["arrows"]) == 9 and core["axioms_passed"] and core["transitive"]
    assert main(["intersect", "triclinic:search", "--format", "json"]) == 0
    inter = json.loads(capsys.readouterr().out)
    assert inter["kind"] == "totally_intransitive" and not inter["uniform"]


def test_complete_command(tmp_path, capsys):
    p = tmp_path / "partial.json"
    identity = [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]
    p.write_text(json.dumps({"bottom": {"src": "X", "dst": "Y", "payload": identity}, "right": {"src": "X", "dst": "Z", "payload": identity}}))
    assert main(["complete", "crystalline:default", "--partial", str(p), "--format", "json"]) == 0
    out = json.loads(capsys.readouterr().out)
    # the top side must equal the left one, and the intersection has one arrow per pair
    assert len(out["completions"]) == 3
    assert main(["complete", "crystalline:default", "--partial", str(tmp_path / "none.json")]) == 2


def test_demo_crystalline(capsys):
    assert main(["demo", "crystalline", "--format", "json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["report"]["flags"]["uniform"]["status"] is True
    held = {k for k, v in out["conjugacy_conditions"]["cycle_signed_cycle"].items() if v and "_" not in k}
    assert held == {"ii"}


def test_demo_triclinic_small(capsys):
    assert main(["demo", "triclinic", "--max-points", "3"]) == 0
    assert "no searched instance" in capsys.readouterr().out


def test_demo_random_and_pair(capsys):
    assert main(["demo", "random", "--seed", "5"]) == 0
    assert main(["demo", "pair", "--seed", "2"]) == 0
    assert "composite: pair:2" in capsys.readouterr().out


def test_threads_are_deterministic():
    one = run("classify", "crystalline:default", "--format", "json", "--threads", "1").stdout
    eight = run("classify", "crystalline:default", "--format", "json", "--threads", "8").stdout
    assert one == eight and one
