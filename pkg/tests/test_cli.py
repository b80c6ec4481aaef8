import json

import pytest

from tml import nd
from tml.cli import main
from tml.syntax import parse


def run(capsys, *argv, expect=None):
    code = main(list(argv))
    captured = capsys.readouterr()
    if expect is not None:
        assert code == expect, (code, captured.out, captured.err)
    return code, captured.out, captured.err


# --- parse ---------------------------------------------------------------------


def test_parse_prints_canonical_form(capsys):
    _, out, _ = run(capsys, "parse", "(p)&((q))", expect=0)
    assert out.strip() == "p & q"


def test_parse_error_position_and_exit(capsys):
    code, out, err = run(capsys, "parse", "p &", expect=2)
    assert "parse error at position 4" in err


def test_parse_json(capsys):
    _, out, _ = run(capsys, "parse", "q > p | p", "--json", expect=0)
    obj = json.loads(out)
    assert obj["schema"] == 1
    assert obj["formula"] == "q > p | p"
    assert obj["variables"] == ["p", "q"]


def test_formula_from_file(capsys, tmp_path):
    path = tmp_path / "f.txt"
    path.write_text("p | ~[]p\n")
    _, out, _ = run(capsys, "valid", f"@{path}", expect=0)
    assert out.strip() == "VALID"


def test_formula_file_missing(capsys):
    code, _, err = run(capsys, "valid", "@/no/such/file", expect=2)
    assert "cannot read" in err


# --- table ---------------------------------------------------------------------


def test_table_succ_layout(capsys):
    _, out, _ = run(capsys, "table", ">", expect=0)
    lines = out.splitlines()
    assert lines[0].split("|")[1].split() == ["0", "n", "b", "1"]
    rows = {l.split("|")[0].strip(): l.split("|")[1].split() for l in lines[2:]}
    assert rows["b"] == ["b", "n", "1", "1"]
    assert rows["n"] == ["n", "1", "b", "1"]


def test_table_word_name_and_json(capsys):
    _, out, _ = run(capsys, "table", "neg", "--json", expect=0)
    obj = json.loads(out)
    assert obj["table"] == {"0": "1", "n": "n", "b": "b", "1": "0"}


def test_table_unknown_connective(capsys):
    run(capsys, "table", "xor", expect=2)


# --- eval -----------------------------------------------------------------------


def test_eval_with_assignment(capsys):
    _, out, _ = run(capsys, "eval", "p > q", "--assign", "p=b,q=n", expect=0)
    assert out.strip() == "n"


def test_eval_missing_assignment(capsys):
    code, _, err = run(capsys, "eval", "p & q", "--assign", "p=1", expect=2)
    assert "misses q" in err


def test_eval_bad_value(capsys):
    run(capsys, "eval", "p", "--assign", "p=2", expect=2)


def test_eval_enumerates_valuations(capsys):
    _, out, _ = run(capsys, "eval", "~p", expect=0)
    lines = out.strip().splitlines()
    assert lines == ["p=0  ->  1", "p=n  ->  n", "p=b  ->  b", "p=1  ->  0"]


def test_eval_vars_pins_order(capsys):
    _, out, _ = run(capsys, "eval", "p", "--vars", "q,p", "--json", expect=0)
    obj = json.loads(out)
    assert obj["variables"] == ["q", "p"]
    assert len(obj["rows"]) == 16
    # the later-pinned variable varies slowest
    assert [r["assignment"]["p"] for r in obj["rows"][:5]] == ["0", "0", "0", "0", "n"]


def test_eval_vars_must_cover_formula(capsys):
    run(capsys, "eval", "p & q", "--vars", "p", expect=2)


# --- valid / countermodel / consequence --------------------------------------------


def test_valid_pin(capsys):
    _, out, _ = run(capsys, "valid", "p | ~[]p", expect=0)
    assert out.strip() == "VALID"


def test_invalid_reports_countermodel(capsys):
    code, out, _ = run(capsys, "valid", "p | ~p", expect=1)
    assert out.startswith("INVALID")
    assert "p=n" in out


def test_valid_json(capsys):
    _, out, _ = run(capsys, "valid", "[]p > p", "--json", expect=0)
    assert json.loads(out) == {"schema": 1, "verdict": "valid"}
    _, out, _ = run(capsys, "valid", "p", "--json", expect=1)
    assert json.loads(out) == {"schema": 1, "verdict": "invalid",
                               "countermodel": {"p": "0"}}


def test_countermodel_command(capsys):
    _, out, _ = run(capsys, "countermodel", "p | ~p", expect=1)
    assert out.strip() == "p=n"
    _, out, _ = run(capsys, "countermodel", "p > p", expect=0)
    assert out.strip() == "VALID"


def test_consequence_holds(capsys):
    _, out, _ = run(capsys, "consequence", "p & q", "--to", "p", expect=0)
    assert out.strip() == "HOLDS"


def test_consequence_fails_with_countermodel(capsys):
    code, out, _ = run(capsys, "consequence", "p", "~p", "--to", "bot", expect=1)
    assert "FAILS" in out and "p=n" in out


def test_consequence_deduction_failure_pin(capsys):
    alpha = ("<>(p & ~p) & <>(q & ~q) & <>((p > q) & ~(p > q)) & p")
    run(capsys, "consequence", alpha, "q", "--to", "bot", expect=0)
    code, out, _ = run(capsys, "consequence", alpha, "--to", "q > bot", expect=1)
    assert "p=n" in out and "q=b" in out


# --- prove / translate ----------------------------------------------------------------


def test_prove_refuted_pin(capsys):
    code, out, _ = run(capsys, "prove", "--system", "full", "[]<>p > <>[]p",
                       expect=1)
    assert out.startswith("REFUTED")
    assert "p=n" in out


def test_prove_proved_both_systems(capsys):
    for system in ("succ", "full"):
        _, out, _ = run(capsys, "prove", "--system", system, "p | ~[]p", expect=0)
        assert out.strip() == "PROVED"


def test_prove_emit_tableau(capsys):
    _, out, _ = run(capsys, "prove", "--system", "succ", "p > p",
                    "--emit-tableau", expect=0)
    assert "PROVED" in out
    assert "[F(>)]" in out
    assert "closed" in out


def test_prove_derived_flag(capsys):
    _, out, _ = run(capsys, "prove", "--system", "succ", "--derived",
                    "p > p", expect=0)
    assert out.strip() == "PROVED"
    code, out, _ = run(capsys, "prove", "--system", "succ", "--derived",
                       "[]<>p > <>[]p", expect=1)
    assert "p=n" in out


def test_prove_json_includes_countermodel(capsys):
    _, out, _ = run(capsys, "prove", "--system", "full", "p & q", "--json",
                    expect=1)
    obj = json.loads(out)
    assert obj["verdict"] == "refuted"
    assert obj["countermodel"] == {"p": "0", "q": "0"}


def test_prove_agrees_with_valid_on_exit_codes(capsys):
    formulas = ["p > p", "p | ~p", "[]p > p", "p > []p", "~(p & ~p)",
                "[](p & q) > ([]p & []q)", "bot > p", "p > top"]
    for text in formulas:
        v = main(["valid", text])
        capsys.readouterr()
        for system in ("succ", "full"):
            t = main(["prove", "--system", system, text])
            capsys.readouterr()
            assert t == v, (text, system)


def test_translate(capsys):
    _, out, _ = run(capsys, "translate", "[]p", "--to", "succ", expect=0)
    assert out.strip() == "~(p > ~p)"
    _, out, _ = run(capsys, "translate", "p > q", "--to", "full", expect=0)
    assert parse(out.strip()) is not None


# --- nd subcommands ------------------------------------------------------------------


@pytest.fixture
def lem_i_file(tmp_path):
    path = tmp_path / "lem-i.json"
    path.write_text(json.dumps(nd.to_json(nd.builtin_examples()["lem-i"])))
    return str(path)


def test_nd_check_ok(capsys, lem_i_file):
    _, out, _ = run(capsys, "nd-check", lem_i_file, expect=0)
    assert "OK" in out
    assert "|- [](p | ~[]p)" in out
    assert "normal: yes" in out


def test_nd_check_json(capsys, lem_i_file):
    _, out, _ = run(capsys, "nd-check", lem_i_file, "--json", expect=0)
    obj = json.loads(out)
    assert obj["verdict"] == "ok"
    assert obj["open_assumptions"] == []
    assert obj["conclusion"] == "[](p | ~[]p)"
    assert obj["normal"] is True


def test_nd_check_ill_formed(capsys, tmp_path):
    obj = nd.to_json(nd.builtin_examples()["lem-i"])
    obj["conclusion"] = "p"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(obj))
    code, out, _ = run(capsys, "nd-check", str(path), expect=1)
    assert "ILL-FORMED" in out


def test_nd_check_bad_json(capsys, tmp_path):
    path = tmp_path / "junk.json"
    path.write_text("{nope")
    run(capsys, "nd-check", str(path), expect=2)
    path.write_text('{"rule": "NoSuchRule", "conclusion": "p", "premises": []}')
    run(capsys, "nd-check", str(path), expect=2)


def test_nd_check_missing_file(capsys):
    run(capsys, "nd-check", "/no/such/proof.json", expect=2)


def test_nd_normalize_detour(capsys, tmp_path):
    proof = nd.and_e1(nd.and_i(nd.Assume(parse("p")), nd.Assume(parse("q"))))
    path = tmp_path / "detour.json"
    path.write_text(json.dumps(nd.to_json(proof)))
    _, out, err = run(capsys, "nd-normalize", str(path), "--trace", expect=0)
    assert json.loads(out) == {"rule": "Assume", "formula": "p", "marker": None}
    assert "detour" in err
    assert "measure=" in err


def test_nd_normalize_json(capsys, tmp_path):
    proof = nd.neg_neg_e(nd.neg_neg_i(nd.Assume(parse("q"))))
    path = tmp_path / "detour.json"
    path.write_text(json.dumps(nd.to_json(proof)))
    _, out, _ = run(capsys, "nd-normalize", str(path), "--json", expect=0)
    obj = json.loads(out)
    assert obj["schema"] == 1
    assert obj["proof"] == {"rule": "Assume", "formula": "q", "marker": None}


def test_nd_normalize_ill_formed(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"rule": "BoxE", "conclusion": "p",
                                "premises": [{"rule": "Assume", "formula": "q",
                                              "marker": None}],
                                "discharges": []}))
    run(capsys, "nd-normalize", str(path), expect=1)


# --- identities / dispatch --------------------------------------------------------------


def test_identities_all_hold(capsys):
    _, out, _ = run(capsys, "identities", expect=0)
    assert "33/33 identities hold" in out
    assert "FAIL" not in out


def test_identities_json(capsys):
    _, out, _ = run(capsys, "identities", "--json", expect=0)
    obj = json.loads(out)
    assert obj["all_hold"] is True
    assert len(obj["results"]) == 33
    suites = {r["suite"] for r in obj["results"]}
    assert suites == {"axioms", "modal", "lattice", "definability", "implication"}


def test_unknown_subcommand(capsys):
    run(capsys, "frobnicate", expect=2)


def test_no_arguments(capsys):
    run(capsys, expect=2)


def test_help_exits_zero(capsys):
    run(capsys, "--help", expect=0)
