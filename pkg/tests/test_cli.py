from __future__ import annotations

import json
import re

import pytest

from rrhilbert.cli import main
from rrhilbert.cli import corpus as corpus_mod
from rrhilbert.cli import pipeline
from rrhilbert.cli.corpus import Check, run_corpus
from rrhilbert.verdict import TheoremVerdicts, Verdict


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_json_is_deterministic(capsys):
    code, first, _ = run(capsys, "analyze", "ex-3.4")
    assert code == 0
    code, second, _ = run(capsys, "analyze", "ex-3.4", "--seed", "42")
    assert code == 0 and first == second
    report = json.loads(first)
    assert set(report) == {"spec", "hilbert", "filtration", "reduction", "depth", "verdicts", "meta"}
    assert report["hilbert"]["coefficients"][:4] == ["8", "4", "0", "0"]
    assert report["reduction"]["pinned"]["r"] == "2"
    assert "timings" not in report["meta"]


def test_timings_are_opt_in(capsys):
    code, out, _ = run(capsys, "analyze", "ex-5.4-m0d2", "--timings")
    assert code == 0
    t = json.loads(out)["meta"]["timings"]
    assert {"hilbert", "reduction", "filtration", "verdicts"} <= set(t)
    assert all(isinstance(v, float) for v in t.values())


def test_json_integers_are_strings(capsys):
    _, out, _ = run(capsys, "analyze", "ex-5.4-m0d2")

    def walk(x):
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        elif isinstance(x, list):
            for v in x:
                walk(v)
        else:
            assert not isinstance(x, int) or isinstance(x, bool)

    walk(json.loads(out))


def _md_table(md: str, header: str) -> list[list[str]]:
    lines = md.splitlines()
    start = next(i for i, l in enumerate(lines) if l.startswith("| " + header))
    rows = []
    for l in lines[start + 2:]:
        if not l.startswith("|"):
            break
        rows.append([c.strip() for c in l.strip("|").split("|")])
    return rows


def test_markdown_numbers_match_json(tmp_path, capsys):
    j, m = tmp_path / "r.json", tmp_path / "r.md"
    assert run(capsys, "analyze", "ex-3.4", "--json", str(j), "--markdown", str(m))[0] == 0
    report, md = json.loads(j.read_text()), m.read_text()
    assert _md_table(md, "n | H(n)") == report["hilbert"]["samples"]
    assert _md_table(md, "e0")[0] == report["hilbert"]["coefficients"]
    gaps = [[r[0], r[1]] for r in _md_table(md, "n | l(closure")]
    assert gaps == [[c["n"], c["gap"]] for c in report["filtration"]["closures"]]
    assert f"stability index rho = {report['filtration']['rho']}" in md


def test_rr_and_reduce(capsys):
    code, out, _ = run(capsys, "rr", "ex-3.4", "1")
    entry = json.loads(out)["rr"]
    assert code == 0 and "x^2" in entry["generators"] and entry["gap"] == "1"
    code, out, _ = run(capsys, "rr", "ex-3.4", "0")
    assert json.loads(out)["rr"]["generators"] == ["1"]
    code, out, _ = run(capsys, "reduce", "ex-5.4-m1d2")
    red = json.loads(out)["reduction"]
    assert code == 0 and red["pinned"]["r"] == "3"
    code, out, _ = run(capsys, "rr", "ex-3.4", "2", "--markdown", "-")
    assert out.startswith("# Ratliff-Rush closure of I^2")


def test_spec_and_list(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0 and out.split() == list(corpus_mod.SPECS)
    code, out, _ = run(capsys, "spec", "ex-4.3")
    assert code == 0 and out.startswith("ring x,y,z over Q order degrevlex\n")


@pytest.mark.parametrize("text, fragment", [
    ("ring x,y\nideal x^2; y^^2\n", ":2:14:"),
    ("ring x,y\nideal\n", "ideal is zero"),
    ("ring x,y\nideal x^2\n", "m-primary"),
])
def test_bad_specs_exit_1(tmp_path, capsys, text, fragment):
    p = tmp_path / "bad.spec"
    p.write_text(text)
    code, _, err = run(capsys, "analyze", str(p))
    assert code == 1 and fragment in err


def test_usage_errors_exit_1(capsys):
    assert run(capsys, "analyze", "no-such-example")[0] == 1
    assert run(capsys, "corpus", "--only", "ex-9.9")[0] == 1
    assert run(capsys, "rr", "ex-3.4", "-1")[0] == 1
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 1


def test_budget_exit_2(capsys):
    code, _, err = run(capsys, "analyze", "ex-3.4", "--power-budget", "1")
    assert code == 2
    assert "budget exhausted" in err and "--power-budget" in err


def test_violation_exit_3(capsys, monkeypatch):
    real = pipeline.evaluate_bounds

    def broken(*args, **kw):
        out = real(*args, **kw)
        out.verdicts.append(Verdict("fake", "0 > 1", "holds", "certified", "fails", False, {}))
        return TheoremVerdicts(out.verdicts)

    monkeypatch.setattr(pipeline, "evaluate_bounds", broken)
    code, out, err = run(capsys, "analyze", "ex-5.4-m0d2")
    assert code == 3
    assert "fake" in err and json.loads(out)["verdicts"]["violations"] == ["fake"]


def test_corpus_only_filter(tmp_path, capsys):
    j = tmp_path / "c.json"
    code, _, err = run(capsys, "corpus", "--only", "ex-5.4-m0d2,ex-5.4-m1d2", "--workers", "1",
                       "--json", str(j))
    assert code == 0
    rows = json.loads(j.read_text())["corpus"]
    assert [r["name"] for r in rows] == ["ex-5.4-m0d2", "ex-5.4-m1d2"]
    assert all(r["ok"] for r in rows)
    assert re.findall(r"^PASS (\S+):", err, re.M) == ["ex-5.4-m0d2", "ex-5.4-m1d2"]


def test_corrupted_expectation_fails(capsys, monkeypatch):
    bad = dict(corpus_mod.EXPECTATIONS)
    bad["ex-5.4-m0d2"] = [Check("e0", 7, lambda a: a.profile.coefficients[0])]
    res = run_corpus(["ex-5.4-m0d2"], expectations=bad)
    assert not res[0].ok and res[0].checks[0][1:] == (7, 6, False)
    monkeypatch.setattr(corpus_mod, "EXPECTATIONS", bad)
    code, _, err = run(capsys, "corpus", "--only", "ex-5.4-m0d2", "--workers", "1")
    assert code == 3
    assert "FAIL ex-5.4-m0d2" in err and "expected 7, got 6" in err


def test_parallel_corpus_keeps_order():
    names = ["ex-5.4-m1d2", "ex-5.4-m0d2"]
    res = run_corpus(names, workers=2)
    assert [r.name for r in res] == names and all(r.ok for r in res)
