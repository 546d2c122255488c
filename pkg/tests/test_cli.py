import io
import subprocess
import sys
from pathlib import Path

import pytest

from ljindex.cli import run

FIX = Path(__file__).parent / "fixtures"


def call(*argv):
    buf = io.StringIO()
    code = run([str(a) for a in argv], out=buf)
    rows = [line.split(": ", 1) for line in buf.getvalue().splitlines()]
    return code, rows


def keys(rows):
    return [k for k, _ in rows]


def test_check_proof_fixture():
    code, rows = call("check-proof", FIX / "identity_proof.ilj")
    assert code == 0
    assert rows == [["command", "check-proof"], ["status", "ok"], ["proofs", "1"]]


def test_mutated_proof_is_invalid():
    code, rows = call("check-proof", FIX / "identity_proof_mutated.ilj")
    assert code == 1
    assert keys(rows) == ["command", "status", "object", "path", "violation"]
    assert dict(rows)["path"] == "intro/ax1"


@pytest.mark.parametrize(
    "argv",
    [("check-proof", "/nonexistent.ilj"), ("check-proof",), ("frobnicate", "x"), ("check-proof", "BAD")],
)
def test_errors_exit_two(argv, tmp_path):
    bad = tmp_path / "bad.ilj"
    bad.write_text("(app (var x))")
    code, rows = call(*[bad if a == "BAD" else a for a in argv])
    assert code == 2
    if rows:
        assert keys(rows) == ["command", "status", "error"]


def test_extract_and_soundness():
    code, rows = call("extract", FIX / "identity_proof.ilj")
    assert code == 0 and dict(rows)["term"] == "(lam x1 (var x1))"
    code, rows = call("soundness", FIX / "identity_proof.ilj")
    assert keys(rows) == ["command", "status", "object", "indices", "family"]


def test_completeness_round_trip(tmp_path):
    out = tmp_path / "proof.ilj"
    code, rows = call("completeness", FIX / "identity_family.ilj", "--out", out)
    assert code == 0
    assert keys(rows) == ["command", "status", "object", "term", "relation", "out"]
    assert dict(rows)["relation"] == "approximant"
    assert call("check-proof", out)[0] == 0
    assert call("church-check", out)[0] == 0
    fam = tmp_path / "fam.ilj"
    assert call("soundness", out, "--out", fam)[0] == 0
    assert call("check-typing", fam)[0] == 0


def test_completeness_is_deterministic():
    first = call("completeness", FIX / "identity_family.ilj", "--seed", 3)
    assert first == call("completeness", FIX / "identity_family.ilj", "--seed", 3)


def test_transformations(tmp_path):
    f = tmp_path / "ws.ilj"
    f.write_text(
        (FIX / "identity_proof.ilj").read_text()
        + "(def J (iset))\n(def u (imap (1 7)))\n"
        + "(def A (farr (fstar (iset 3)) (imap (3 1)) (fstar (iset 1))))\n"
        + "(def B (farr (fstar (iset 8)) (imap (8 1)) (fstar (iset 1))))\n"
        + "(def P (points ((1 star) (2 (pt (mset star) star)))))\n"
    )
    code, rows = call("restrict", f, "--name", "id_proof", "--arg", "J")
    assert code == 0 and keys(rows)[-1] == "result"
    code, rows = call("relocate", f, "--name", "id_proof", "--arg", "u")
    assert code == 0 and "7" in dict(rows)["result"]
    code, rows = call("sim-convert", f, "--name", "A", "--arg", "B")
    assert code == 0 and dict(rows)["relation"] == "approximant"
    code, rows = call("represent", f, "--name", "P")
    assert code == 0 and keys(rows) == ["command", "status", "object", "formula"]
    code, rows = call("restrict", f, "--name", "id_proof", "--arg", "u")
    assert code == 2


def test_oracle_search(tmp_path):
    f = tmp_path / "t.ilj"
    f.write_text("(def M (lam x (var x)))\n")
    code, rows = call("oracle-search", f, "--bound", 1)
    assert code == 0
    assert keys(rows)[:5] == ["command", "status", "object", "bound", "judgments"]
    assert int(dict(rows)["judgments"]) == keys(rows).count("judgment") > 0
    g = tmp_path / "typed.ilj"
    g.write_text("(carrier a (p q))\n(def M (app (var x) (var y)))\n(def E (env (x (arr (atom a) (atom a))) (y (atom a))))\n")
    code, rows = call("oracle-search", g, "--mode", "typed", "--arg", "E", "--bound", 2)
    assert code == 0 and int(dict(rows)["judgments"]) > 0


def test_ccc_laws():
    code, rows = call("ccc-laws", "--count", 100, "--seed", 5)
    assert code == 0
    assert rows[2:] == [["seed", "5"], ["triples", "100"], ["associativity", "holds"], ["left-identity", "holds"], ["right-identity", "holds"]]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ljindex", "check-proof", str(FIX / "identity_proof_mutated.ilj")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 1
    assert proc.stdout.splitlines()[:2] == ["command: check-proof", "status: invalid"]
