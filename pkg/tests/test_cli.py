import json

import pytest

from bcidx.cli import build_parser, run
from bcidx.constants import ExitCode


def _run_json(capsys, *argv):
    code = run([*argv, "--format", "json", "-q"])
    return code, json.loads(capsys.readouterr().out)


def test_normalize(fixtures, capsys):
    code, payload = _run_json(capsys, "normalize", str(fixtures / "redex.term"))
    assert code == ExitCode.OK
    assert payload == {"normal_form": "n.a"}


def test_normalize_text(fixtures, capsys):
    assert run(["normalize", str(fixtures / "ite.term"), "-q"]) == ExitCode.OK
    assert capsys.readouterr().out.strip() == "(pair n.a n.b)"


def test_length(fixtures, capsys):
    code, payload = _run_json(capsys, "length", str(fixtures / "length.term"))
    assert code == ExitCode.OK
    assert payload == {"length": "(+ (* 2 l_eta) (* 1 l_id) (* 1 l_pair))"}


def test_check_accepts(fixtures, capsys):
    code, payload = _run_json(capsys, "check", str(fixtures / "csintro.bcp"))
    assert code == ExitCode.OK
    assert payload["accepted"] is True


def test_check_rejects_with_path(fixtures, capsys):
    code, payload = _run_json(capsys, "check", str(fixtures / "mutations" / "wrong_renaming.bcp"))
    assert code == ExitCode.REJECTED
    assert payload["accepted"] is False
    assert payload["path"] == [0, 1]
    assert payload["diagnostics"][0]["category"] == "refl"


def test_malformed_input(tmp_path, capsys):
    bad = tmp_path / "bad.bcp"
    bad.write_text("(rule (refl (ren)) (concl (left n.a) (right n.a))", encoding="utf-8")
    assert run(["check", str(bad), "-q"]) == ExitCode.MALFORMED
    assert "error:" in capsys.readouterr().err


def test_missing_file(tmp_path, capsys):
    assert run(["check", str(tmp_path / "absent.bcp"), "-q"]) == ExitCode.MALFORMED


def test_restr_elim_writes_output(fixtures, tmp_path, capsys):
    target = tmp_path / "out.bcp"
    assert run(["restr-elim", str(fixtures / "restr.bcp"), "-o", str(target), "-q"]) == ExitCode.OK
    written = target.read_text(encoding="utf-8")
    assert "restr" not in written
    assert run(["check", str(target), "-q"]) == ExitCode.OK


def test_candidates_of_a_term(fixtures, capsys):
    code, payload = _run_json(capsys, "candidates", str(fixtures / "ite.term"))
    assert code == ExitCode.OK
    assert payload["candidates"] == ["(pair n.a n.b)", "n.a", "n.b"]
    assert payload["truncated"] is False


def test_candidates_of_a_goal(fixtures, capsys):
    code, payload = _run_json(capsys, "candidates", str(fixtures / "csintro.goal"))
    assert code == ExitCode.OK
    assert payload["candidates"] == ["(adv g)", "n.n", "n.n0", "n.n1"]


def test_search_emits_a_checkable_proof(fixtures, tmp_path, capsys):
    target = tmp_path / "found.bcp"
    code, payload = _run_json(capsys, "search", str(fixtures / "csintro.goal"), "--emit", str(target))
    assert code == ExitCode.OK
    assert payload["outcome"] == "found"
    assert payload["proof"] == str(target)
    assert run(["check", str(target), "-q"]) == ExitCode.OK


def test_search_not_found(tmp_path, capsys):
    goal = tmp_path / "hard.goal"
    goal.write_text("(goal (left n.n0) (right (pair n.n0 n.n0)))", encoding="utf-8")
    code, payload = _run_json(capsys, "search", str(goal), "--max-depth", "2")
    assert code == ExitCode.REJECTED
    assert payload["outcome"] == "not-found"


def test_search_timeout(fixtures, capsys):
    code, payload = _run_json(capsys, "search", str(fixtures / "csintro.goal"), "--timeout", "1e-9")
    assert code == ExitCode.REJECTED
    assert payload["outcome"] == "timeout"


def test_order_file_changes_normal_forms(fixtures, tmp_path, capsys):
    term = tmp_path / "swap.term"
    term.write_text("(ite (adv h) (ite (adv g) n.a n.b) n.c)", encoding="utf-8")
    _, default = _run_json(capsys, "normalize", str(term))
    assert default["normal_form"] == "(ite (adv g) (ite (adv h) n.a n.c) (ite (adv h) n.b n.c))"
    _, ordered = _run_json(capsys, "normalize", str(term), "--order", str(fixtures / "order.txt"))
    assert ordered["normal_form"] == "(ite (adv h) (ite (adv g) n.a n.b) n.c)"


def test_bad_budget_is_malformed(fixtures, capsys):
    assert run(["search", str(fixtures / "csintro.goal"), "--max-depth", "0", "-q"]) == ExitCode.MALFORMED


def test_unknown_command_exits():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["prove", "x"])
