"""Acceptance run over the bundled catalog.

``extcoh check-suite --format machine`` is run twice as a subprocess; the
first document supplies criteria 1-8 and the pair is compared byte for byte
for determinism.  Each criterion prints one PASS/FAIL line (also collected
into the terminal summary by conftest.py).

Criterion 7 fails on abelian kernels where multiplication by m is not onto:
a class killed by m need not come from A[m] (Z8 over Z4 is the smallest
case).  It is reported as FAIL and marked as an expected failure, as is the
exit status of the full run, which is 3 because of it.
"""

import json
import re
import subprocess
import sys

import pytest

from extcoh.suite import CRITERIA

NAMES = dict(CRITERIA)
NAMES[9] = "determinism"
CRITERION_1_LIMIT = 600.0  # seconds


def _check_suite():
    proc = subprocess.run(
        [sys.executable, "-m", "extcoh", "check-suite", "--format", "machine"],
        capture_output=True,
        text=True,
        check=False,
    )
    return proc


@pytest.fixture(scope="module")
def runs():
    first = _check_suite()
    second = _check_suite()
    return first, second


@pytest.fixture(scope="module")
def document(runs):
    return json.loads(runs[0].stdout)


def report(n, ok, detail, lines):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n} ({NAMES[n]}): {detail}"
    print(line)
    lines.append(line)
    return ok


def _criterion(document, n):
    return next(c for c in document["results"]["criteria"] if c["criterion"] == n)


def _detail(c):
    cov = ", ".join(f"{k} {v}" for k, v in sorted(c["coverage"].items()))
    text = f"{c['checks']} checks on {c['instances']} instances, {c['failures']} failures ({cov})"
    if c["examples"]:
        ex = c["examples"][0]
        text += f"; e.g. {ex['instance']}: {ex['failure']}"
    return text


def _seconds(stderr, n):
    m = re.search(rf"^criterion {n}: ([0-9.]+)s$", stderr, re.M)
    return float(m.group(1)) if m else None


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 8])
def test_criterion(n, document, runs, acceptance_lines):
    c = _criterion(document, n)
    detail = _detail(c)
    ok = c["status"] == "pass" and c["failures"] == 0 and c["checks"] > 0
    if n == 1:
        secs = _seconds(runs[0].stderr, 1)
        detail += f"; {secs:.1f}s"
        ok = ok and secs is not None and secs < CRITERION_1_LIMIT
    assert report(n, ok, detail, acceptance_lines), detail


@pytest.mark.xfail(strict=True, reason="a class killed by m need not come from A[m] when A is not m-divisible")
def test_criterion_7(document, acceptance_lines):
    c = _criterion(document, 7)
    detail = _detail(c)
    ok = c["status"] == "pass" and c["failures"] == 0 and c["checks"] > 0
    assert report(7, ok, detail, acceptance_lines), detail


def test_criterion_9(runs, acceptance_lines):
    a, b = runs
    same = a.stdout == b.stdout and a.returncode == b.returncode
    detail = f"{len(a.stdout)} bytes, exit {a.returncode} / {b.returncode}, {'identical' if same else 'different'}"
    assert report(9, same and len(a.stdout) > 0, detail, acceptance_lines), detail


def test_machine_document_shape(document):
    assert set(document) == {"schema", "command", "instance-digest", "results", "timing"}
    assert [c["criterion"] for c in document["results"]["criteria"]] == [n for n, _ in CRITERIA]
    assert document["timing"]["instances"] == 680


@pytest.mark.xfail(strict=True, reason="exit 3 follows from the criterion 7 failures")
def test_full_run_exits_zero(runs):
    assert runs[0].returncode == 0, runs[0].stderr[-2000:]
