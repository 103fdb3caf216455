from __future__ import annotations

import pytest

from rrhilbert.filtration import RatliffRush, filtration_report, stability_index
from rrhilbert.hilbert import profile
from rrhilbert.ideal import Ideal
from rrhilbert.ring import Ring

from conftest import RANDOM_CORPUS

R3 = Ring("xyz")
EX34 = ["x^2 - y^2", "y^2 - z^2", "x*y", "y*z", "x*z"]


def test_closure_of_example_ideal_is_m_squared():
    I = Ideal(R3, EX34)
    closed, cert = RatliffRush(I).closure(1)
    m2 = Ideal(R3, R3.gens()).power(2)
    assert closed.equals(m2)
    assert closed.contains("x^2") and not I.contains("x^2")
    assert cert.power_contained and cert.product_check
    assert RatliffRush(I).gap(1) == 1


def test_closure_of_zero_power_is_unit():
    closed, _ = RatliffRush(Ideal(R3, EX34)).closure(0)
    assert closed.is_unit()


def test_powers_of_m_are_closed():
    m = Ideal(R3, R3.gens())
    rho, gaps = stability_index(m)
    assert rho == 1
    assert all(g == 0 for _, g in gaps)


def test_monomial_gap():
    # I = (x^4, x^3 y, x y^3, y^4) misses x^2 y^2, which lies in every I^{n+1} : I^n
    R = Ring("xy")
    I = Ideal(R, ["x^4", "x^3*y", "x*y^3", "y^4"])
    closed, _ = RatliffRush(I).closure(1)
    assert closed.contains("x^2*y^2")
    assert RatliffRush(I).gap(1) == 1


@pytest.mark.parametrize("case", range(len(RANDOM_CORPUS)))
def test_filtration_invariants(case):
    R, I = RANDOM_CORPUS[case]
    F = filtration_report(I)
    P = profile(I)
    d = R.dimension
    prev = None
    for (n, closed, _), cert in zip(F.closures, F.certificates):
        assert I.power(n).issubset(closed)
        assert all(a >= b for a, b in zip(cert.chain_lengths, cert.chain_lengths[1:]))
        if prev is not None:
            assert closed.issubset(prev)
        prev = closed
    T = F.tilde_profile
    assert T.coefficients[:2] == P.coefficients[:2]  # e0, e1 preserved
    assert T.coefficients[:d + 1] == P.coefficients[:d + 1]
    gap_sum = sum(g for _, g in F.gaps)
    assert gap_sum == (-1) ** (d + 1) * (P.coefficients[d + 1] - T.coefficients[d + 1])
    assert all(g == 0 for n, g in F.gaps if n >= F.rho)
