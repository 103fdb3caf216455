from __future__ import annotations

import pytest

from rrhilbert.hilbert import (
    BudgetExceeded,
    NotMPrimaryError,
    binom,
    coefficients_from_numerator,
    hilbert_samuel,
    profile,
)
from rrhilbert.ideal import Ideal
from rrhilbert.ring import Ring

from conftest import RANDOM_CORPUS


@pytest.mark.parametrize("d", [1, 2, 3])
def test_maximal_ideal_of_polynomial_ring(d):
    R = Ring("xyz"[:d])
    P = profile(Ideal(R, R.gens()))
    assert P.numerator == [1]
    assert P.coefficients[:d + 1] == [1] + [0] * d
    for n in range(1, 6):
        assert P.H(n) == binom(n + d - 1, d)


@pytest.mark.parametrize("a, b", [(2, 3), (3, 3), (1, 4)])
def test_complete_intersection(a, b):
    # G_I(A) = (A/I)[T1, T2], so l(A/I^n) = ab * C(n+1, 2)
    R = Ring("xy")
    P = profile(Ideal(R, [f"x^{a}", f"y^{b}"]))
    assert P.numerator == [a * b]
    assert P.coefficients[:3] == [a * b, 0, 0]
    assert [P.H(n) for n in range(1, 5)] == [a * b * binom(n + 1, 2) for n in range(1, 5)]


def test_node_curve():
    # A = k[x,y]/(xy), I = m: l(A/m^n) = 2n - 1 for n >= 1
    R = Ring("xy", relations=["x*y"])
    P = profile(Ideal(R, ["x", "y"]))
    assert P.dimension == 1
    assert P.numerator == [1, 1]
    assert P.coefficients[:2] == [2, 1]
    assert [P.H(n) for n in range(1, 6)] == [1, 3, 5, 7, 9]


def test_coefficients_from_numerator():
    # e_i = h^{(i)}(1)/i!
    assert coefficients_from_numerator([5, 0, 6, -4, 1], 5) == [8, 4, 0, 0, 1]


@pytest.mark.parametrize("case", range(len(RANDOM_CORPUS)))
def test_profile_invariants(case):
    R, I = RANDOM_CORPUS[case]
    P = profile(I)
    d = R.dimension
    h = P.numerator
    assert h[0] == I.quotient_length()  # h(0) = l(A/I)
    assert sum(h) == P.coefficients[0]  # h(1) = e0
    assert P.fitted == P.coefficients[:d + 1]  # the two routes agree
    for n, v in P.samples:
        assert v == hilbert_samuel(I, n)
        if n >= P.threshold:
            assert v == P.polynomial(n)
    assert P.coefficients[0] > 0


def test_budget_and_primary_errors():
    R = Ring("xy")
    with pytest.raises(BudgetExceeded) as info:
        profile(Ideal(R, ["x^3", "y^3", "x*y^2"]), budget=1)
    assert info.value.flag == "--power-budget"
    with pytest.raises(NotMPrimaryError):
        profile(Ideal(R, ["x^2", "x*y"]))
