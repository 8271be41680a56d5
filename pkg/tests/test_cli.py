import json
import subprocess
import sys

import pytest

from extcoh.catalog import find_instance, instance_to_doc
from extcoh.cli import main


def run(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def machine(capsys, *argv):
    status, out, err = run(capsys, *argv, "--format", "machine")
    assert status == 0, err
    doc = json.loads(out)
    assert set(doc) == {"schema", "command", "instance-digest", "results", "timing"}
    return doc


def test_h2_counts(capsys):
    doc = machine(capsys, "h2", "--instance", "z2-z2")
    assert doc["command"] == "h2"
    assert doc["results"]["count"] == 2
    assert doc["results"]["neutral"] == 1
    ids = [c["id"] for c in doc["results"]["classes"]]
    assert all(i.startswith("h2-") for i in ids) and len(set(ids)) == 2


def test_ext_counts_and_orbits(capsys):
    doc = machine(capsys, "ext", "--instance", "z4xz2")
    assert doc["results"]["count"] == 4
    assert len(doc["results"]["orbits"]) == 4
    assert {c["H-order"] for c in doc["results"]["classes"]} == {16}


def test_output_is_deterministic(capsys):
    a = run(capsys, "ext", "--instance", "gamma-z2-z2", "--format", "machine")[1]
    b = run(capsys, "ext", "--instance", "gamma-z2-z2", "--format", "machine")[1]
    assert a == b


def test_file_and_bundled_instance_agree(capsys, tmp_path):
    path = tmp_path / "d4.json"
    path.write_text(json.dumps(instance_to_doc(find_instance("d4"))))
    a = machine(capsys, "h2", "--instance", str(path))
    b = machine(capsys, "h2", "--instance", "d4")
    assert a["instance-digest"] == b["instance-digest"]
    assert a["results"] == b["results"]


def test_twist_and_act_by_id(capsys):
    ext = machine(capsys, "ext", "--instance", "z3-z3")["results"]["classes"]
    first = ext[0]["id"]
    doc = machine(capsys, "twist", "--instance", "z3-z3", "--class", first[:12], "--z", "0")
    assert doc["results"]["result"] == first
    # Z = G here, so Ext(F, Z) acts on itself: the zero extension acts trivially
    zero = next(c["id"] for c in ext if c["orbit"] == 0 and c["index"] == 0)
    doc = machine(capsys, "act", "--instance", "z3-z3", "--class", ext[1]["id"], "--by", zero)
    assert doc["results"]["level"] == "ext"
    h2 = machine(capsys, "h2", "--instance", "z3-z3")["results"]["classes"]
    doc = machine(capsys, "act", "--instance", "z3-z3", "--class", h2[1]["id"], "--by", h2[0]["id"])
    assert doc["results"]["level"] == "h2"


def test_reduce_methods(capsys):
    ext = machine(capsys, "ext", "--instance", "z12")["results"]["classes"]
    for c in ext:
        lem = machine(capsys, "reduce", "--instance", "z12", "--class", c["id"])
        assert lem["results"]["reproduces"]
        tor = machine(capsys, "reduce", "--instance", "z12", "--class", c["id"], "--method", "torsion")
        dev = machine(
            capsys, "reduce", "--instance", "z12", "--class", c["id"], "--method", "devissage", "--series", "0;0,2,4;0,1,2,3,4,5"
        )
        assert tor["results"]["subgroup"] == dev["results"]["subgroup"]


def test_validate_echoes_document(capsys):
    doc = machine(capsys, "validate", "--instance", "v4-swap")
    assert doc["results"]["format"] == "extcoh-instance/1"


def test_validation_errors_exit_1(capsys, tmp_path):
    status, out, err = run(capsys, "h2", "--instance", "no-such-instance")
    assert status == 1 and out == ""
    assert json.loads(err.splitlines()[0])["error"] == "validation"
    bad = instance_to_doc(find_instance("z2-z2"))
    bad["groups"]["G"] = [[0, 1], [1, 1]]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    status, out, err = run(capsys, "h2", "--instance", str(path))
    assert status == 1
    assert json.loads(err.splitlines()[0])["error"] in {"NoInverse", "NotAssociative", "NotClosed"}
    status, _, err = run(capsys, "reduce", "--instance", "z12", "--class", "ext-00")
    assert status == 1
    status, _, err = run(capsys, "twist", "--instance", "z12", "--class", "ext-00000000", "--z", "x")
    assert status == 1


def test_size_limit_exits_2(capsys):
    status, out, err = run(capsys, "ext", "--instance", "z2-z2", "--bound", "1")
    assert status == 2
    assert json.loads(err.splitlines()[0])["error"] == "SizeLimitExceeded"


def test_not_reducible_is_reported(capsys):
    ext = machine(capsys, "ext", "--instance", "z4xz2")["results"]["classes"]
    codes = set()
    for c in ext:
        status, out, err = run(capsys, "reduce", "--instance", "z4xz2", "--class", c["id"], "--method", "torsion")
        codes.add(status)
        if status:
            assert json.loads(err.splitlines()[0])["error"] == "NotReducible"
    assert 0 in codes


def test_check_suite_on_one_instance(capsys):
    doc = machine(capsys, "check-suite", "--instance", "z3-z3", "--only", "1,3,4")
    crit = doc["results"]["criteria"]
    assert [c["criterion"] for c in crit] == [1, 3, 4]
    assert all(c["status"] == "pass" for c in crit)


def test_check_suite_failure_exits_3(capsys):
    status, out, err = run(capsys, "check-suite", "--instance", "z4xz2", "--only", "7", "--format", "machine")
    assert status == 3
    assert json.loads(out)["results"]["passed"] is False


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "extcoh", "h2", "--instance", "z2-z3", "--format", "machine"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["count"] == 1
    assert proc.stderr.startswith("wall ")


def test_validate_reports_nonassociative_triple(capsys, tmp_path):
    doc = instance_to_doc(find_instance("z2-z2"))
    loop = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    doc["groups"]["G"] = loop
    path = tmp_path / "loop.json"
    path.write_text(json.dumps(doc))
    status, out, err = run(capsys, "validate", "--instance", str(path))
    assert status == 1 and out == ""
    payload = json.loads(err.splitlines()[0])
    assert payload["error"] == "NotAssociative"
    a, b, c = payload["witness"]
    assert loop[loop[a][b]][c] != loop[a][loop[b][c]]
