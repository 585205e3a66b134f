import json
import subprocess
import sys
from pathlib import Path

import pytest

from strsem.cli import main

EX = Path(__file__).resolve().parents[1] / "examples"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_walking_arrow(capsys):
    code, out, _ = run(capsys, "validate", EX / "walking_arrow.cat")
    assert code == 0
    assert "0 failed" in out


def test_validate_broken_category(capsys):
    code, out, _ = run(capsys, "validate", EX / "broken_assoc.cat")
    assert code == 1
    assert "[FAIL]" in out and "associativity" in out


def test_check_adjunction_roundtrip(capsys):
    code, out, _ = run(capsys, "check-adjunction", "--theory", EX / "z2.theory", "--functor", EX / "z2sets.fun")
    assert code == 0
    assert "[PASS] Psi and Theta are mutually inverse" in out


def test_structured_output_is_json(capsys):
    code, out, _ = run(capsys, "semantics", "--theory", "kleisli(maybe, 2)", "--format", "structured")
    assert code == 0
    doc = json.loads(out)
    assert doc["suite"] == "semantics"
    assert all(c["status"] == "pass" for c in doc["checks"])


@pytest.mark.parametrize("argv, needle", [
    (["kleisli", "--monad", "maybe", "--bound", "3"], "[PASS]"),
    (["recognize-monad", "--theory", "kleisli(maybe, 2)"], "monadic"),
    (["codensity", "--functor", "const(2)", "--bound", "2"], "0:2 1:4 2:16"),
    (["structure", "--functor", "gset(Z(2), 2)"], "1->1:2"),
    (["factorize", "--functor", "forget(kleisli(maybe, 2))"], "n is full and faithful"),
    (["monoid-theory", "--monoid", "klein"], "recognition recovers M"),
    (["profinite", "--monoid", "Z(4)"], "|G^|: 4"),
    (["phi-check", "--monoid", "Z(3)"], "Phi is bijective"),
    (["enough-subobjects", "--category", "lattice(4, 0)"], "verdict: enough subobjects"),
    (["enough-subobjects", "--category", "discrete(a, b)"], "witness"),
    (["closure", "--presentation", str(EX / "involution.pres"), "--arity", "1", "--depth", "4"], "classes: 2"),
])
def test_commands_pass(capsys, argv, needle):
    code, out, _ = run(capsys, *argv)
    assert code == 0, out
    assert needle in out


def test_models_on_groups(capsys):
    code, out, _ = run(capsys, "models", EX / "groups.pres", "--bound", "2")
    assert code == 0
    assert "models on 2 elements: 2" in out


def test_soundness_on_groups(capsys):
    code, out, _ = run(capsys, "soundness", EX / "groups.pres", "--arity", "1", "--depth", "2", "--bound", "2")
    assert code == 0
    assert "no provable pair separated by a model" in out


def test_completeness_verdict_is_not_a_failure(capsys):
    code, out, _ = run(capsys, "complete?", "--topology", EX / "chain2_idem.top")
    assert code == 0
    assert "verdict: not complete" in out
    code, out, _ = run(capsys, "completion", "--topology", EX / "chain2_idem.top")
    assert code == 0
    assert "0->0:1" in out


def test_not_monadic_is_a_verdict(capsys):
    code, out, _ = run(capsys, "recognize-monad", "--theory", EX / "chain2_idem.top")
    assert code == 0
    assert "not monadic" in out


@pytest.mark.parametrize("argv", [
    ["validate", "no/such/file.cat"],
    ["semantics", "--theory", "kleisli(maybe, 2)", "--bound", "99"],
    ["semantics"],
    ["factorize", "--functor", "free(maybe, 2)"],
    ["profinite", "--monoid", "idem"],
    ["verify-thesis", "--only", "13"],
])
def test_input_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("strsem: error:")


def test_parse_error_reports_line(capsys, tmp_path):
    p = tmp_path / "bad.cat"
    p.write_text("CATEGORY c\nOBJECTS a\nHOMS\n  a a : i\nIDENTITIES\n  a : j\nEND\n")
    code, _, err = run(capsys, "validate", p)
    assert code == 2
    assert f"{p}:6:" in err


def test_out_and_export(capsys, tmp_path):
    out, exp = tmp_path / "r.txt", tmp_path / "mod.json"
    code, _, _ = run(capsys, "semantics", "--theory", "kleisli(maybe, 2)", "--out", out,
                     "--export", exp, "--format", "structured")
    assert code == 0
    assert json.loads(out.read_text())["suite"] == "semantics"
    assert json.loads(exp.read_text())["kind"] == "category"


def test_reports_are_byte_identical(capsys):
    argv = ["check-adjunction", "--theory", EX / "z2.theory", "--functor", EX / "z2sets.fun", "--format", "structured"]
    a = run(capsys, *argv)
    b = run(capsys, *argv)
    assert a == b


def test_verify_thesis_subset_via_console_script(tmp_path):
    cmd = [sys.executable, "-m", "strsem.cli", "verify-thesis", "--only", "2,11"]
    a = subprocess.run(cmd, capture_output=True, text=True)
    b = subprocess.run(cmd, capture_output=True, text=True)
    assert a.returncode == 0, a.stdout + a.stderr
    assert a.stdout == b.stdout
    assert "2/2 criteria pass" in a.stdout
