from __future__ import annotations

import copy
import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rrhilbert.ideal import Ideal
from rrhilbert.ring import Ring
from rrhilbert.verdict import (FAILS, HOLDS, NOT_EVALUATED, evaluate_bounds,
                               in_newton_polyhedron, is_integrally_closed_monomial)

S = Ring("xy")
T = Ring("xyz")


def _segment_dominates(a, c, b) -> bool:
    """Is there t in [0, 1] with t*a + (1-t)*c <= b componentwise?"""
    lo, hi = Fraction(0), Fraction(1)
    for aj, cj, bj in zip(a, c, b):
        # t*(aj - cj) <= bj - cj
        slope, rhs = aj - cj, bj - cj
        if slope == 0:
            if rhs < 0:
                return False
        elif slope > 0:
            hi = min(hi, Fraction(rhs, slope))
        else:
            lo = max(lo, Fraction(rhs, slope))
    return lo <= hi


def newton_2d_oracle(b, exps) -> bool:
    # in the plane every point of conv(A) + R^2_{>=0} is dominated by a point on an edge
    return any(_segment_dominates(a, c, b) for a, c in itertools.product(exps, repeat=2))


pts2 = st.tuples(st.integers(0, 6), st.integers(0, 6))


@given(st.lists(pts2, min_size=1, max_size=5), pts2)
def test_newton_membership_matches_planar_oracle(exps, b):
    assert in_newton_polyhedron(b, exps) == newton_2d_oracle(b, exps)


def test_newton_membership_known_points():
    assert in_newton_polyhedron((1, 1), [(2, 0), (0, 2)])
    assert not in_newton_polyhedron((0, 1), [(2, 0), (0, 2)])
    assert not in_newton_polyhedron((0, 0), [(2, 0), (0, 2)])
    assert in_newton_polyhedron((1, 1, 1), [(3, 0, 0), (0, 3, 0), (0, 0, 3)])
    assert not in_newton_polyhedron((1, 1, 0), [(3, 0, 0), (0, 3, 0), (0, 0, 3)])


@pytest.mark.parametrize("gens, status, method", [
    (["x", "y"], "yes", "maximal-ideal"),
    (["x^2", "x*y", "y^2"], "yes", "newton-polyhedron"),
    (["x^2", "y^3", "x*y^2"], "yes", "newton-polyhedron"),
    (["x^2", "y^2"], "no", "newton-polyhedron"),
    (["x^4", "y^4", "x^3*y", "x*y^3"], "no", "newton-polyhedron"),
])
def test_closure_status_planar(gens, status, method):
    c = is_integrally_closed_monomial(Ideal(S, gens))
    assert (c.status, c.method) == (status, method)


def test_closure_witness_is_in_polyhedron_but_not_in_ideal():
    c = is_integrally_closed_monomial(Ideal(S, ["x^2", "y^2"]))
    assert c.witness == (1, 1)
    c = is_integrally_closed_monomial(Ideal(S, ["x^4", "y^4", "x^3*y", "x*y^3"]))
    assert c.witness == (2, 2)


@given(st.lists(pts2.filter(any), min_size=1, max_size=4), st.integers(2, 4), st.integers(2, 4))
def test_closure_status_matches_brute_force(exps, p, q):
    gens = [f"x^{p}", f"y^{q}"] + [f"x^{a}*y^{b}" for a, b in exps]
    I = Ideal(S, gens)
    c = is_integrally_closed_monomial(I)
    lead = [g.leading_exponents() for g in I.groebner_basis()]
    missing = [b for b in itertools.product(range(p + 1), range(q + 1))
               if not any(all(x <= y for x, y in zip(a, b)) for a in lead)
               and newton_2d_oracle(b, lead)]
    if c.status == "no":
        assert c.witness in missing
    elif Ideal(S, ["x", "y"]).equals(I):
        assert c.method == "maximal-ideal"
    else:
        assert c.status == "yes" and not missing


def test_closure_status_fallbacks():
    nonmono = Ideal(T, ["x^2 - y^2", "y^2 - z^2", "x*y", "y*z", "x*z"])
    assert is_integrally_closed_monomial(nonmono).status == "unknown"
    c = is_integrally_closed_monomial(nonmono, asserted=True)
    assert (c.status, c.closed, c.grade) == ("asserted", True, "asserted")
    Q = Ring("xy", relations=["x*y"])
    assert is_integrally_closed_monomial(Ideal(Q, ["x^2", "y^2"])).status == "unknown"
    assert is_integrally_closed_monomial(Ideal(Q, ["x", "y"])).status == "yes"


def test_three_variable_monomial_ideal_is_not_closed():
    gens = ["x^4", "y^4", "z^4", "x^3*y", "x*y^3", "y^3*z", "y*z^3", "x^2*y*z", "x*y^2*z"]
    I = Ideal(T, gens)
    c = is_integrally_closed_monomial(I)
    assert c.status == "no"
    x = T.monomial(c.witness)
    assert not I.contains(x)
    # an integral equation x^2 in I^2 certifies membership of the closure here
    assert I.power(2).contains(x * x) or I.power(3).contains(x ** 3)


def _all_verdicts(analyses):
    for a in analyses:
        yield from ((a, v) for v in a.verdicts)


def test_gating_invariant(corpus_analyses):
    for _, v in _all_verdicts(corpus_analyses):
        judged = v.conclusion in (HOLDS, FAILS)
        assert judged == (v.hypothesis == HOLDS and v.observed is not None), v.id
        if judged:
            assert v.conclusion == (HOLDS if v.observed else FAILS)
        else:
            assert v.conclusion == NOT_EVALUATED
            if v.hypothesis != HOLDS:
                assert v.notes


def test_random_corpus_has_no_violations(corpus_analyses):
    bad = [(a.spec.name, v.id, v.numbers) for a, v in _all_verdicts(corpus_analyses)
           if v.conclusion == FAILS]
    assert bad == []


def test_filtration_bound_in_dimension_three(corpus_analyses):
    seen = 0
    for a in corpus_analyses:
        v = a.verdicts.get("thm-4.1-filtration")
        e = a.profile.coefficients
        if a.profile.dimension >= 3:
            seen += 1
            assert e[3] <= e[2] * (e[2] - 1)
            assert v.conclusion == HOLDS
            assert v.numbers["error_term"] == e[2] * (e[2] - 1) - e[3]
        else:
            assert v.conclusion == NOT_EVALUATED
    assert seen >= 8


def test_gap_identity_on_corpus(corpus_analyses):
    for a in corpus_analyses:
        v = a.verdicts.get("eq-3.4-gap-sum")
        assert v.conclusion == HOLDS
        assert v.numbers["gap_sum"] == sum(g for _, g in a.filtration.gaps)


def test_filtration_slack_on_three_generated_example(example):
    v = example("ex-4.3").verdicts.get("thm-4.1-filtration")
    assert (v.numbers["e2"], v.numbers["e3"], v.numbers["bound"]) == (3, 1, 6)
    assert v.numbers["error_term"] == 5


def test_rossi_bound_is_tight_but_gated_on_containment(example):
    a = example("ex-3.4")
    v = a.verdicts.get("rossi-bound@pinned")
    assert (v.numbers["r"], v.numbers["bound"], v.numbers["slack"]) == (2, 2, 0)
    # J = (x^2, y^2, z^2) is not inside I, so the bound is only recorded
    assert (v.hypothesis, v.conclusion, v.observed) == (FAILS, NOT_EVALUATED, True)


def test_vn_formula_on_examples(example):
    a = example("ex-3.4")
    assert [v for _, v in a.vn.values][:2] == [4, 0]
    assert sum(v for _, v in a.vn.values) == a.profile.coefficients[1] == 4
    assert a.vn.all_zero
    b = example("ex-4.3")
    V = [v for _, v in b.vn.values]
    e = b.profile.coefficients
    # e_i = sum_n C(n, i-1) V_n, recomputed by hand
    assert sum(V) == e[1]
    assert sum(n * v for n, v in enumerate(V)) == e[2]
    assert sum(n * (n - 1) // 2 * v for n, v in enumerate(V)) == e[3]
    assert b.verdicts.get("eq-3.1-vn").conclusion == HOLDS


def test_vn_vanishes_for_the_maximal_ideal():
    from rrhilbert.filtration import filtration_report
    from rrhilbert.hilbert import profile
    from rrhilbert.reduction import pinned_reduction, tilde_reduction_number
    from rrhilbert.verdict import vn_formula_check

    m = Ideal(S, ["x", "y"])
    p = profile(m)
    f = filtration_report(m, through=3)
    red = pinned_reduction(m, Ideal(S, ["x", "y"]), bound=6, window=2)
    closure = lambda n: m.power(n)  # noqa: E731  powers of m are closed
    red.r_tilde, red.tilde_evidence = tilde_reduction_number(m, red.J, closure, 4, rho=f.rho)
    assert red.r_tilde == 0
    vn = vn_formula_check(p, f, red, closure)
    # J = I gives V_0 = l(m/J) = 0, matching e_1(m) = 0
    assert all(v == 0 for _, v in vn.values)
    assert vn.all_zero and vn.e0_residual == 0


def test_evaluate_bounds_is_pure(example):
    a = example("ex-3.4")
    args = (a.profile, a.filtration, a.reduction, a.closure_status)
    kw = dict(pinned=a.pinned, good_length=a.good_length, depth=a.depth,
              tilde_depth=a.tilde_depth, vn=a.vn)
    before = copy.deepcopy(a.profile.coefficients)
    first = evaluate_bounds(*args, **kw).to_list()
    second = evaluate_bounds(*args, **kw).to_list()
    assert first == second == a.verdicts.to_list()
    assert a.profile.coefficients == before


def test_dimension_two_skips_dimension_three_bounds(example):
    a = example("ex-5.4-m0d2")
    for vid in ("thm-4.1-filtration", "thm-4.1-integrally-closed", "thm-4.4-signs"):
        assert a.verdicts.get(vid).conclusion == NOT_EVALUATED
    assert a.verdicts.get("thm-5.1-rtilde@pinned").conclusion == HOLDS
