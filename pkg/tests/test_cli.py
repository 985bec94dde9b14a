from __future__ import annotations

import json
import subprocess
import sys

import pytest
from conftest import FIXTURES

from tquiver.cli import ParseError, dump, load, main, parse
from tquiver.quiver import validate

ALL = sorted(p.stem for p in FIXTURES.glob("*.quiver"))


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def fx(name):
    return FIXTURES / f"{name}.quiver"


@pytest.mark.parametrize("name", ALL)
def test_round_trip(name):
    q = load(fx(name))
    assert parse(dump(q)) == q
    assert dump(parse(dump(q))) == dump(q)


def test_ex8_11_document_parses_and_validates():
    text = """quiver v1 pl
vertices
cell p {0}
cell I [1, 2]
edges
cell e {0}
map s piece e {0} slope 0 intercept 1 -> I
map r piece e {0} slope 0 intercept 0 -> p
"""
    assert validate(parse(text)).ok


def test_zero_denominator_is_positioned():
    text = "quiver v1 pl\nvertices\ncell v [0, 1/0]\n"
    with pytest.raises(ParseError) as exc:
        parse(text, "doc")
    assert (exc.value.line, exc.value.col) == (3, 12)
    assert str(exc.value).startswith("doc:3:12: malformed rational '1/0'")


def test_unknown_directive():
    with pytest.raises(ParseError) as exc:
        parse("quiver v1 discrete\nvertex v\nloop v\n")
    assert exc.value.line == 3 and "unknown directive" in exc.value.msg


def test_conditions_remark9(capsys):
    code, out, _ = run(capsys, "conditions", fx("remark9"))
    assert code == 0
    assert out.splitlines()[:2] == ["Condition (L): HOLDS", "Condition (K): FAILS witness v=0"]


def test_simple_twoloops(capsys):
    code, out, _ = run(capsys, "simple", fx("twoloops"))
    assert (code, out) == (0, "SIMPLE\n")


def test_simple_ex8_11(capsys):
    code, out, _ = run(capsys, "simple", fx("ex8_11"))
    assert code == 0 and out.startswith("NOT SIMPLE (minimality)")


def test_enumerate_vinfw(capsys):
    code, out, _ = run(capsys, "ideals", "--enumerate", fx("vinfw"))
    assert code == 0
    assert out.splitlines()[0] == "3 admissible pairs (conjectural order)"


def test_check_pair(capsys):
    code, out, _ = run(capsys, "ideals", "--check", "I(1,2]", "I{1}", fx("ex8_11"))
    assert code == 0 and "ADMISSIBLE" in out


def test_validate_fold_exits_1(capsys):
    code, out, _ = run(capsys, "validate", fx("fold"))
    assert code == 1 and "FAIL witness e@1/2" in out


def test_json_shape_and_stability(capsys):
    code, out, _ = run(capsys, "--json", "conditions", fx("remark9"))
    assert code == 0
    doc = json.loads(out)
    assert {"verdict", "witnesses", "sets", "bound", "complete"} <= set(doc)
    assert doc["sets"] == ["v{0}"] and doc["complete"] is True
    # flags also work after the subcommand
    code2, out2, _ = run(capsys, "conditions", "--json", fx("remark9"))
    assert (code2, out2) == (code, out)


@pytest.mark.parametrize("name", ["ex8_11", "remark9", "vinfw", "weighted", "ex8_11_tails"])
def test_report_bytes_are_stable(capsys, name):
    a = run(capsys, "report", "--json", fx(name))
    b = run(capsys, "report", "--json", fx(name))
    assert a == b


def test_construct_product_matches_fixture(capsys):
    code, out, _ = run(capsys, "construct", "product", fx("cycle3"), "x [0,1]")
    assert code == 0 and parse(out) == load(fx("cycle3_interval"))


def test_construct_tails(capsys):
    code, out, _ = run(capsys, "construct", "tails", fx("vw"))
    assert code == 0 and parse(out) == load(fx("vw_tails"))


def test_construct_quotient(capsys):
    code, out, _ = run(capsys, "construct", "quotient", fx("remark9"), "v(0,2]")
    assert code == 0 and "quiver v1 pl" in out


def test_xcorr_check(capsys):
    code, out, _ = run(capsys, "xcorr", "check", fx("weighted"), "--samples", "50")
    assert code == 0 and "FAIL" not in out


def test_tailed_report_is_partial(capsys):
    assert run(capsys, "report", fx("ex8_11_tails"))[0] == 2
    assert run(capsys, "conditions", fx("ex8_11_tails"))[0] == 1


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 64
    with pytest.raises(SystemExit) as exc:
        main(["conditions", str(fx("remark9")), "--maxlen", "0"])
    assert exc.value.code == 64


def test_missing_file(capsys):
    code, _, err = run(capsys, "classify", "no-such.quiver")
    assert code == 1 and err.startswith("error:")


@pytest.mark.parametrize("name", ALL)
def test_exit_codes_on_corpus(capsys, name):
    valid = validate(load(fx(name))).ok
    assert run(capsys, "validate", fx(name))[0] == (0 if valid else 1)
    assert run(capsys, "classify", fx(name))[0] == 0
    assert run(capsys, "conditions", fx(name))[0] in (0, 1, 2)
    assert run(capsys, "report", fx(name))[0] in (0, 2)


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "tquiver", "simple", str(fx("oneloop"))], capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout.startswith("NOT SIMPLE (Condition (L))")
