from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rrhilbert.cli.corpus import SPECS, corpus_spec
from rrhilbert.cli.specfile import SpecError, default_budgets, load_spec, parse_spec

BASIC = """# two variables
ring x,y over Q order deglex
ideal x^2; x*y   # trailing comment
ideal y^3
reduction x^2; y^3
assert integrally_closed
set window=4
seed 7
"""


def test_parse_basic():
    s = parse_spec(BASIC, name="basic")
    assert s.variables == ["x", "y"]
    assert (s.field, s.order) == ("Q", "deglex")
    assert s.generators == ["x^2", "x*y", "y^3"]
    assert s.reduction == ["x^2", "y^3"]
    assert s.integrally_closed
    assert s.budgets["window"] == 4
    assert s.budgets["power_budget"] == default_budgets()["power_budget"]
    assert s.seed == 7
    R, I, J = s.build()
    assert I.quotient_length() == 4
    assert J.issubset(I)


def test_defaults():
    s = parse_spec("ring x,y\nideal x; y\n")
    assert (s.field, s.order, s.seed) == ("Q", "degrevlex", 42)
    assert s.reduction == [] and s.build()[2] is None


@pytest.mark.parametrize("text, line, column, fragment", [
    ("ideal x\n", 1, 1, "first directive"),
    ("ring x,y\nideal x^2; y^^2\n", 2, 14, "expected an integer"),
    ("ring x,y\nideal x; z\n", 2, 10, "unknown variable"),
    ("ring x,y order weird\nideal x\n", 1, 16, "unknown monomial order"),
    ("ring x,y\nfrobnicate\n", 2, 1, "unknown directive"),
    ("ring x,y\nset power_budget=0\n", 2, 18, "positive integer"),
    ("ring x,y\nset nonsense=3\n", 2, 5, "set <key>=<int>"),
    ("ring x,y\nseed abc\n", 2, 6, "integer seed"),
    ("ring x,y\ndim -1\n", 2, 5, "non-negative"),
    ("ring x,y\nring x\n", 2, 1, "duplicate"),
    ("ring x,y\nassert pretty\n", 2, 8, "unknown assertion"),
    ("ring x,y\nideal\n", 2, 7, "ideal is zero"),
    ("ring x,y\nideal 0; 0\n", 2, 7, "ideal is zero"),
    ("ring x,y over R\nideal x\n", 1, 15, "field"),
    ("ring x,y\ndim 3\nideal x; y\n", 2, 5, "declared dimension"),
])
def test_errors_carry_positions(text, line, column, fragment):
    with pytest.raises(SpecError) as info:
        parse_spec(text, name="t.spec").build()
    err = info.value
    assert (err.line, err.column) == (line, column), str(err)
    assert fragment in str(err)
    assert str(err).startswith(f"t.spec:{line}:{column}: ")


def test_missing_ring():
    with pytest.raises(SpecError, match="missing 'ring'"):
        parse_spec("# nothing\n")


@pytest.mark.parametrize("name", list(SPECS))
def test_corpus_round_trip(name):
    s = corpus_spec(name)
    again = parse_spec(s.to_text(), name=name)
    assert again == s
    assert again.to_text() == s.to_text()


mono = st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(any)


@given(st.lists(mono, min_size=1, max_size=4), st.integers(-5, 10**6),
       st.sampled_from(["degrevlex", "deglex", "lex"]), st.integers(1, 9))
def test_round_trip_generated(exps, seed, order, window):
    gens = "; ".join(f"x^{a}*y^{b}" for a, b in exps)
    s = parse_spec(f"ring x,y order {order}\nideal {gens}\nset window={window}\nseed {seed}\n")
    assert parse_spec(s.to_text()) == s


def test_quotient_ring_spec():
    s = parse_spec("ring x,y\nmod x*y\ndim 1\nideal x; y\n")
    R, I, _ = s.build()
    assert R.dimension == 1
    assert [I.power(n).quotient_length() for n in range(1, 4)] == [1, 3, 5]


def test_to_dict_is_plain():
    d = corpus_spec("ex-3.4").to_dict()
    assert d["ring"]["variables"] == ["x", "y", "z"]
    assert d["reduction"] == ["x^2", "y^2", "z^2"]
    assert d["assertions"] == {"integrally_closed": False}


def test_load_spec(tmp_path):
    p = tmp_path / "a.spec"
    p.write_text(BASIC)
    s = load_spec(str(p))
    assert s.name == str(p) and s.seed == 7
