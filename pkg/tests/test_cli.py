import json
import subprocess
import sys

import pytest

from conftest import DATA, SYSTEMS

from catrewrite.cli import CONFLUENCE, INPUT, OK, VERIFY, main, parse_term


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_passes_on_four_element_strategy(capsys):
    code, out, _ = run(capsys, "check", SYSTEMS / "four_element_s1.json")
    assert code == OK
    assert "TG4           PASS" in out


def test_check_reports_tg3_witness(capsys):
    code, out, _ = run(capsys, "check", DATA / "tg3_violation.json")
    assert code == VERIFY
    assert "TG3           FAIL  witness=c" in out


@pytest.mark.parametrize("name", ["bad_rational.json", "float_literal.json"])
def test_inexact_numbers_are_input_errors(capsys, name):
    code, _, err = run(capsys, "check", DATA / name)
    assert code == INPUT
    assert "input error" in err


def test_missing_file_and_bad_term(capsys):
    assert run(capsys, "check", "no-such-file.json")[0] == INPUT
    assert run(capsys, "normalize", SYSTEMS / "x2_plus_1.json", "x^3+y")[0] == INPUT


def test_normalize_examples(capsys):
    code, out, _ = run(capsys, "normalize", SYSTEMS / "x2_plus_1.json", "x^3+x^2+x+1")
    assert code == OK
    assert "normal form  0\n" in out and "agree        yes" in out
    code, out, _ = run(capsys, "normalize", SYSTEMS / "chain.json", "c")
    assert "normal form  c\n" in out
    code, out, _ = run(capsys, "normalize", SYSTEMS / "four_element_s2.json", "a")
    assert "normal form  d\n" in out and "path         f1 ; f4" in out


def test_parse_term():
    basis = ["1", "x", "x^2"]
    v = parse_term("3/2*x^2 - x + 2", basis)
    assert str(v.coeff("x^2")) == "3/2" and v.coeff("x") == -1 and v.coeff("1") == 2
    assert not parse_term("0", basis)


def test_newman_exit_codes(capsys):
    code, out, _ = run(capsys, "newman", SYSTEMS / "diamond.json")
    assert code == OK
    assert "ac    bd ; cd^-1" in out
    code, _, err = run(capsys, "newman", SYSTEMS / "four_element_s1.json")
    assert code == CONFLUENCE
    code, out, _ = run(capsys, "newman", SYSTEMS / "peak.json")
    assert code == CONFLUENCE
    code, out, _ = run(capsys, "newman", SYSTEMS / "x2_plus_1.json")
    assert code == OK
    assert "dim E/R     2" in out and "dim min(E)  2" in out


def test_newman_json(capsys):
    code, out, _ = run(capsys, "newman", SYSTEMS / "diamond.json", "--json")
    data = json.loads(out)
    assert code == OK and data["confluent"] is True
    assert data["certificate"] == {"equations": True, "iso": True, "min_size": 1, "quotient_size": 1}
    assert data["conversions"]["ac"] == "bd ; cd^-1"


def test_quotient_command(capsys):
    code, out, _ = run(capsys, "quotient", SYSTEMS / "x2_plus_1.json")
    assert code == OK
    assert "[x^7]           -x" in out
    assert "same as E/Rsym  yes" in out


def test_suite_command(capsys):
    code, out, _ = run(capsys, "suite", "--count", "0")
    assert code == OK and "SC agreement 0/0" in out
    code, out, _ = run(capsys, "suite", "--count", "20", "--kind", "all", "--seed", "3")
    assert code == OK
    assert "SC agreement 20/20" in out
    assert "quotient invariance 20/20" in out


def test_output_is_deterministic(capsys):
    first = run(capsys, "suite", "--count", "15", "--kind", "all", "--json")
    second = run(capsys, "suite", "--count", "15", "--kind", "all", "--json")
    assert first == second
    a = run(capsys, "newman", SYSTEMS / "x2_plus_1.json")
    b = run(capsys, "newman", SYSTEMS / "x2_plus_1.json")
    assert a == b


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "catrewrite", "check", str(DATA / "tg3_violation.json")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == VERIFY
    assert "witness=c" in proc.stdout
