from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from rrhilbert.field import FieldError, parse_field
from rrhilbert.ring import MonomialOrder, Ring, RingError, monomial_compare

R = Ring("xyz")
SX, SY, SZ = sympy.symbols("x y z")

exps = st.tuples(*[st.integers(0, 3)] * 3)
polys = st.dictionaries(exps, st.integers(-5, 5).filter(bool), max_size=5)


def mk(d):
    return R.from_dict(d)


def to_sympy(d):
    return sympy.expand(sum(c * SX**a * SY**b * SZ**e for (a, b, e), c in d.items()))


def from_poly(p):
    return to_sympy({e: int(c) for e, c in p.items()})


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    A, B, C = mk(a), mk(b), mk(c)
    assert A + B == B + A
    assert A * B == B * A
    assert (A + B) + C == A + (B + C)
    assert (A * B) * C == A * (B * C)
    assert A * (B + C) == A * B + A * C
    assert A + R.zero() == A
    assert A * R.one() == A
    assert (A - A).is_zero()


@given(polys, polys)
def test_product_matches_sympy(a, b):
    assert from_poly(mk(a) * mk(b)) == sympy.expand(to_sympy(a) * to_sympy(b))
    assert from_poly(mk(a) - mk(b)) == sympy.expand(to_sympy(a) - to_sympy(b))


@given(polys, st.integers(0, 3))
def test_power_matches_sympy(a, n):
    assert from_poly(mk(a) ** n) == sympy.expand(to_sympy(a) ** n)


def test_orders_on_known_pairs():
    # x*z^2 vs y^3: same degree; degrevlex looks at the last variable
    assert monomial_compare("degrevlex", (1, 0, 2), (0, 3, 0)) == "less"
    assert monomial_compare("deglex", (1, 0, 2), (0, 3, 0)) == "greater"
    assert monomial_compare("lex", (0, 0, 5), (1, 0, 0)) == "less"
    assert monomial_compare("deglex", (0, 0, 5), (1, 0, 0)) == "greater"
    assert monomial_compare("degrevlex", (1, 1, 0), (1, 1, 0)) == "equal"


@pytest.mark.parametrize("kind", ["degrevlex", "deglex", "lex"])
@given(a=exps, b=exps, c=exps)
def test_orders_are_monomial_orders(kind, a, b, c):
    o = MonomialOrder(kind)
    shift = lambda u: tuple(x + y for x, y in zip(u, c))  # noqa: E731
    assert o.compare(a, b) == o.compare(shift(a), shift(b))
    assert o.compare(shift(a), a) >= 0
    assert o.compare(a, b) == -o.compare(b, a)


def test_ring_validation():
    with pytest.raises(RingError):
        Ring([])
    with pytest.raises(RingError):
        Ring(["x", "x"])
    with pytest.raises(RingError):
        Ring(["1x"])


def test_fields():
    assert parse_field("Q").is_rational
    assert parse_field("QQ").is_rational
    assert parse_field("p").p == 32003
    assert parse_field("p:7").p == 7
    for bad in ("R", "p:8", "p:x", "p:1"):
        with pytest.raises(FieldError):
            parse_field(bad)


@given(st.integers(1, 6))
def test_prime_field_inverse(a):
    F = parse_field("p:7")
    assert F.mul(a % 7, F.inv(a % 7)) == 1


def test_prime_field_arithmetic_wraps():
    F = parse_field("p:5")
    S = Ring("xy", F)
    p = S.gen("x") * 3 + S.gen("x") * 2
    assert p.is_zero()
    assert str((S.gen("x") + S.gen("y")) ** 5) == "x^5 + y^5"


def test_rational_coefficients():
    S = Ring("x")
    p = S.gen("x").scale(Fraction(1, 3))
    assert (p * 3) == S.gen("x")
    assert str(p.monic()) == "x"


def test_relations_reduce_in_quotient_ring():
    S = Ring("xy", relations=["x^2 - y^3"])
    assert S.dimension == 1
    assert len(S.relations) == 1
