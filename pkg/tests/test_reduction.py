from __future__ import annotations

import pytest

from rrhilbert.filtration import RatliffRush
from rrhilbert.hilbert import BudgetExceeded, profile
from rrhilbert.ideal import Ideal
from rrhilbert.reduction import (
    good_behaviour_mod,
    locally_equal_product,
    pinned_reduction,
    random_minimal_reduction,
    reduction_number,
    reduction_step,
    superficial_sequence,
    tilde_reduction_number,
    vv_depth_probe,
)
from rrhilbert.ring import Ring

from conftest import RANDOM_CORPUS

R2 = Ring("xy")
R3 = Ring("xyz")
EX34 = ["x^2 - y^2", "y^2 - z^2", "x*y", "y*z", "x*z"]


def global_step(I: Ideal, J: Ideal, n: int) -> bool:
    F = I.power(n) if n else Ideal(I.ring, [I.ring.one()])
    prods = Ideal(I.ring, [a * b for a in J.generators for b in F.generators])
    return prods.equals(I.power(n + 1))


def test_local_equality_is_not_global_equality():
    x, y = R2.gens()
    target = Ideal(R2, ["x", "y^2"])
    J = Ideal(R2, [x + x * x, y * y])
    unit = Ideal(R2, [R2.one()])
    assert locally_equal_product(target, J, unit)
    assert not J.equals(target)


def test_parameter_ideal_is_its_own_reduction():
    I = Ideal(R2, ["x^2", "y^3"])
    assert reduction_number(I, I)[0] == 0
    m = Ideal(R3, R3.gens())
    assert reduction_number(m, m)[0] == 0


def test_equigenerated_monomial_reduction():
    I = Ideal(R2, ["x^4", "x^3*y", "x*y^3", "y^4"])
    J = Ideal(R2, ["x^4", "y^4"])
    r, evidence = reduction_number(I, J)
    assert [global_step(I, J, n) for n in range(r + 3)] == [n >= r for n in range(r + 3)]
    assert r == 2
    assert all(ok for n, ok in evidence if n >= r)


@pytest.mark.parametrize("case", [i for i in range(len(RANDOM_CORPUS)) if i % 3 == 1])
def test_local_test_matches_global_on_homogeneous_ideals(case):
    R, I = RANDOM_CORPUS[case]
    red = random_minimal_reduction(I, seed=case)
    for n in range(red.r + 2):
        assert reduction_step(I, red.J, n) == global_step(I, red.J, n)


def test_example_pinned_reduction_outside_I():
    I = Ideal(R3, EX34)
    red = pinned_reduction(I, Ideal(R3, ["x^2", "y^2", "z^2"]))
    assert red.r == 2
    assert not red.contained
    assert red.pinned


def test_random_reduction_is_deterministic():
    I = Ideal(R3, EX34)
    a = random_minimal_reduction(I, seed=42)
    b = random_minimal_reduction(I, seed=42)
    assert [str(g) for g in a.J.generators] == [str(g) for g in b.J.generators]
    assert a.J.issubset(I) and len(a.J.generators) == 3


def test_reduction_budget():
    I = Ideal(R2, ["x^4", "x^3*y", "x*y^3", "y^4"])
    with pytest.raises(BudgetExceeded):
        reduction_number(I, Ideal(R2, ["x^4", "y^4"]), bound=1)


def test_tilde_reduction_number_on_example():
    I = Ideal(R3, EX34)
    eng = RatliffRush(I)
    J = Ideal(R3, ["x^2", "y^2", "z^2"])
    closure = lambda n: eng.closure(n)[0]  # noqa: E731
    r, evidence = tilde_reduction_number(I, J, closure, top=5)
    assert r == 1
    assert evidence[0] == (0, False)


@pytest.mark.parametrize("case", range(0, len(RANDOM_CORPUS), 2))
def test_superficial_element_preserves_coefficients(case):
    R, I = RANDOM_CORPUS[case]
    d = R.dimension
    [cert] = superficial_sequence(I, 1, seed=case)
    assert cert.passed
    # rebuild A/(x) by hand, independently of the image machinery
    S = Ring(R.variables, relations=[str(cert.x)], dimension=d - 1)
    J = Ideal(S, [str(g) for g in I.generators])
    assert profile(J).coefficients[:d] == profile(I).coefficients[:d]


def test_depth_probe_complete_intersection():
    I = Ideal(R3, ["x^2", "y^2", "z^2"])
    probe = vv_depth_probe(I, list(I.generators), range(1, 5))
    assert probe.depth_lower_bound == 3


def test_depth_probe_example_is_zero():
    I = Ideal(R3, EX34)
    J = Ideal(R3, ["x^2", "y^2", "z^2"])
    probe = vv_depth_probe(I, list(J.generators), range(1, 5))
    assert probe.depth_lower_bound == 0


@pytest.mark.parametrize("gens", [["x^2", "y^2"], ["x^3", "x*y", "y^3"], ["x^2 - y^2", "x*y"]])
def test_depth_probe_methods_agree(gens):
    I = Ideal(R2, gens)
    red = random_minimal_reduction(I, seed=1)
    seq = list(red.J.generators)
    a = vv_depth_probe(I, seq, range(1, 5), method="colon")
    b = vv_depth_probe(I, seq, range(1, 5), method="intersection")
    assert a.depth_lower_bound == b.depth_lower_bound


def test_good_behaviour_for_maximal_ideal():
    m = Ideal(R3, R3.gens())
    ok, evidence = good_behaviour_mod(m, R3.gen("x"))
    assert ok and evidence
