"""Bounds and implications about Hilbert coefficients as predicates.

Each predicate has a hypothesis and a conclusion.  The conclusion is only
judged (holds/fails) when the hypothesis holds; otherwise it is recorded as
not evaluated, although the raw comparison is still kept under ``observed``.
Hypotheses backed only by finite windows of degrees carry grade "observed",
those resting on a user assertion carry grade "asserted".
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .filtration import FiltrationReport
from .hilbert import HilbertProfile, binom
from .ideal import Ideal
from .monomial import divides, minimalize
from .reduction import DepthProbe, Reduction

HOLDS = "holds"
FAILS = "fails"
UNKNOWN = "unknown"
NOT_EVALUATED = "not-evaluated"

CERTIFIED = "certified"
OBSERVED = "observed"
ASSERTED = "asserted"

_GRADE_RANK = {CERTIFIED: 0, ASSERTED: 1, OBSERVED: 2}


class VerdictError(ValueError):
    pass


# -- integral closure of monomial ideals ---------------------------------------
@dataclass
class ClosureStatus:
    status: str  # yes | no | asserted | unknown
    method: str  # newton-polyhedron | maximal-ideal | user-assertion | none
    witness: tuple | None = None  # exponent vector in the closure but not in I
    reason: str = ""

    @property
    def closed(self) -> bool | None:
        if self.status in ("yes", "asserted"):
            return True
        if self.status == "no":
            return False
        return None

    @property
    def grade(self) -> str:
        return ASSERTED if self.status == "asserted" else CERTIFIED


def _rational(v: float) -> Fraction:
    return Fraction(v).limit_denominator(10**6)


def in_newton_polyhedron(b, exps) -> bool:
    """Whether b lies in conv(exps) + R_{>=0}^n.

    Floating-point LPs (HiGHS) only propose an answer; it is accepted once an
    exact certificate checks out with Fractions: convex weights lam with
    sum lam_i a_i <= b for membership, or a functional w >= 0 with
    <w, b> < min_i <w, a_i> for non-membership.
    """
    from scipy.optimize import linprog

    exps = [tuple(a) for a in exps]
    if any(divides(a, b) for a in exps):
        return True
    n, k = len(b), len(exps)
    # separation: maximize s - <w, b> with s <= <w, a_i>, w >= 0, sum w = 1
    c = [float(v) for v in b] + [-1.0]
    A_ub = [[-float(a[j]) for j in range(n)] + [1.0] for a in exps]
    sep = linprog(c, A_ub=A_ub, b_ub=[0.0] * k, A_eq=[[1.0] * n + [0.0]], b_eq=[1.0],
                  bounds=[(0, None)] * n + [(None, None)], method="highs")
    if sep.status == 0 and -sep.fun > 1e-9:
        w = [max(_rational(v), Fraction(0)) for v in sep.x[:n]]
        wb = sum(wj * bj for wj, bj in zip(w, b))
        if min(sum(wj * aj for wj, aj in zip(w, a)) for a in exps) > wb:
            return False
    # membership: lam >= 0, sum lam = 1, sum lam_i a_i <= b
    A_ub = [[float(a[j]) for a in exps] for j in range(n)]
    mem = linprog([0.0] * k, A_ub=A_ub, b_ub=[float(v) for v in b], A_eq=[[1.0] * k], b_eq=[1.0],
                  bounds=[(0, None)] * k, method="highs")
    if mem.status == 0:
        lam = [max(_rational(v), Fraction(0)) for v in mem.x]
        total = sum(lam)
        if total > 0:
            lam = [v / total for v in lam]
            if all(sum(lam[i] * exps[i][j] for i in range(k)) <= b[j] for j in range(n)):
                return True
    raise VerdictError(f"no exact certificate for {tuple(b)} from the LP solution")


def is_integrally_closed_monomial(ideal: Ideal, asserted: bool = False) -> ClosureStatus:
    """Closure status of I.

    Monomial ideals of a polynomial ring are decided through the Newton
    polyhedron: if some x^b lies in the closure but not in I then so does
    x^min(b, M), M the componentwise maximum of the generator exponents, so
    only the box [0, M] has to be searched.  The maximal ideal is always
    closed.  Anything else is "asserted" or "unknown".
    """
    ring = ideal.ring
    if Ideal(ring, ring.gens()).equals(ideal):
        return ClosureStatus("yes", "maximal-ideal")
    if ring.relations:
        return _fallback(asserted, "ideal of a quotient ring")
    basis = ideal.groebner_basis()
    if not basis or not all(g.is_monomial() for g in basis):
        return _fallback(asserted, "not a monomial ideal")
    exps = minimalize(g.leading_exponents() for g in basis)
    if any(sum(a) == 0 for a in exps):
        return ClosureStatus("yes", "newton-polyhedron")  # unit ideal
    top = [max(a[j] for a in exps) for j in range(ring.nvars)]
    for b in itertools.product(*(range(t + 1) for t in top)):
        if any(divides(a, b) for a in exps):
            continue
        if in_newton_polyhedron(b, exps):
            return ClosureStatus("no", "newton-polyhedron", witness=tuple(b))
    return ClosureStatus("yes", "newton-polyhedron")


def _fallback(asserted: bool, reason: str) -> ClosureStatus:
    if asserted:
        return ClosureStatus("asserted", "user-assertion", reason=reason)
    return ClosureStatus("unknown", "none", reason=reason)


# -- verdict records -----------------------------------------------------------
@dataclass
class Hypothesis:
    status: str
    grade: str = CERTIFIED
    reasons: list = field(default_factory=list)


@dataclass
class Verdict:
    id: str
    statement: str
    hypothesis: str
    grade: str
    conclusion: str
    observed: bool | None
    numbers: dict
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "statement": self.statement,
            "hypothesis": {"status": self.hypothesis, "grade": self.grade},
            "conclusion": self.conclusion,
            "observed": self.observed,
            "numbers": dict(self.numbers),
            "notes": list(self.notes),
        }


@dataclass
class TheoremVerdicts:
    verdicts: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.verdicts)

    def __len__(self):
        return len(self.verdicts)

    def get(self, vid: str) -> Verdict:
        for v in self.verdicts:
            if v.id == vid:
                return v
        raise KeyError(vid)

    def ids(self) -> list[str]:
        return [v.id for v in self.verdicts]

    def violations(self) -> list[Verdict]:
        return [v for v in self.verdicts if v.conclusion == FAILS]

    def to_list(self) -> list[dict]:
        return [v.to_dict() for v in self.verdicts]


def _verdict(vid: str, statement: str, hyp: Hypothesis, value: bool | None,
             numbers: dict, notes=()) -> Verdict:
    if hyp.status == HOLDS and value is not None:
        conclusion = HOLDS if value else FAILS
    else:
        conclusion = NOT_EVALUATED
    notes = list(hyp.reasons) + list(notes)
    if hyp.status != HOLDS:
        notes.append("not applicable by hypothesis" if hyp.status == FAILS
                     else "hypothesis could not be decided")
    return Verdict(vid, statement, hyp.status, hyp.grade if hyp.status != FAILS else CERTIFIED,
                   conclusion, value, numbers, notes)


def _any_of(*branches: Hypothesis) -> Hypothesis:
    """Disjunction: holds if some branch holds (best grade wins)."""
    held = [b for b in branches if b.status == HOLDS]
    if held:
        best = min(held, key=lambda b: _GRADE_RANK[b.grade])
        return Hypothesis(HOLDS, best.grade, list(best.reasons))
    if any(b.status == UNKNOWN for b in branches):
        reasons = [r for b in branches if b.status == UNKNOWN for r in b.reasons]
        return Hypothesis(UNKNOWN, OBSERVED, reasons)
    return Hypothesis(FAILS, CERTIFIED, [r for b in branches for r in b.reasons])


def _all_of(*parts: Hypothesis) -> Hypothesis:
    if any(p.status == FAILS for p in parts):
        return Hypothesis(FAILS, CERTIFIED, [r for p in parts if p.status == FAILS for r in p.reasons])
    if any(p.status == UNKNOWN for p in parts):
        return Hypothesis(UNKNOWN, OBSERVED, [r for p in parts if p.status == UNKNOWN for r in p.reasons])
    grade = max((p.grade for p in parts), key=lambda g: _GRADE_RANK[g], default=CERTIFIED)
    return Hypothesis(HOLDS, grade, [r for p in parts for r in p.reasons])


def _fact(ok: bool, reason: str, grade: str = CERTIFIED) -> Hypothesis:
    return Hypothesis(HOLDS if ok else FAILS, grade, [] if ok or not reason else [reason])


# -- the V_n formula -----------------------------------------------------------
@dataclass
class VnCheck:
    values: list  # (n, V_n) with V_n = ℓ(Ĩ^{n+1} / J Ĩ^n)
    residuals: dict  # i -> e_i - sum_{n >= i-1} C(n, i-1) V_n, 1 <= i <= d
    e0_residual: int  # e_0 - ℓ(A/J)
    zero_from: int  # V_n = 0 for every checked n >= zero_from
    top: int

    @property
    def all_zero(self) -> bool:
        return self.e0_residual == 0 and not any(self.residuals.values())


def local_colength(ring, polys) -> int:
    """ℓ(A_m / K A_m) for the ideal K generated by ``polys``.

    ℓ(A/(K + m^N)) increases with N; once two consecutive values agree,
    m^N ⊆ K + m^{N+1}, so m^N ⊆ K locally by Nakayama and the value is exact.
    """
    m = Ideal(ring, ring.gens())
    prev = None
    N = 1
    while True:
        cur = m.power(N).plus(polys).quotient_length()
        if cur == prev:
            return cur
        prev = cur
        N += 1


def vn_formula_check(profile: HilbertProfile, filtration: FiltrationReport, red: Reduction,
                     closure) -> VnCheck:
    """Compare e_i with sum_{n >= i-1} C(n, i-1) V_n.

    ``closure(n)`` returns Ĩ^n.  V_n vanishes exactly when Ĩ^{n+1} = J Ĩ^n
    locally, which the tilde evidence of ``red`` already decides; the other
    V_n are computed as ℓ(A/J Ĩ^n) - ℓ(A/Ĩ^{n+1}).
    """
    if red.r_tilde is None or not red.tilde_evidence:
        raise VerdictError("the reduction carries no Ratliff-Rush evidence")
    J = red.J
    ring = J.ring
    if not J.issubset(closure(1)):
        raise VerdictError("J is not contained in the closure of I")
    d = profile.dimension
    e = profile.coefficients
    equal = dict(red.tilde_evidence)
    top = max(equal)
    values = []
    for n in range(0, top + 1):
        if equal[n]:
            values.append((n, 0))
            continue
        F = closure(n) if n else Ideal(ring, [ring.one()])
        prods = [j * f for j in J.own_generators for f in F.own_generators]
        values.append((n, local_colength(ring, prods) - closure(n + 1).quotient_length()))
    zero_from = top + 1
    for n, v in reversed(values):
        if v:
            break
        zero_from = n
    if zero_from > top:
        raise VerdictError("V_n does not vanish within the checked range")
    residuals = {}
    for i in range(1, d + 1):
        residuals[i] = e[i] - sum(binom(n, i - 1) * v for n, v in values)
    e0_res = e[0] - local_colength(ring, list(J.own_generators))
    return VnCheck(values, residuals, e0_res, zero_from, top)


# -- evaluation ------------------------------------------------------------------
def _depth_at_least(probe: DepthProbe | None, k: int, label: str) -> Hypothesis:
    if k <= 0:
        return Hypothesis(HOLDS, CERTIFIED)
    if probe is None:
        return Hypothesis(UNKNOWN, OBSERVED, [f"no depth probe for {label}"])
    if probe.depth_lower_bound >= k:
        return Hypothesis(HOLDS, OBSERVED)
    return Hypothesis(UNKNOWN, OBSERVED,
                      [f"depth probe for {label} observed only {probe.depth_lower_bound} < {k}"])


def _good_at_least(good_length: int | None, k: int) -> Hypothesis:
    if k <= 0:
        return Hypothesis(HOLDS, CERTIFIED)
    if good_length is None:
        return Hypothesis(UNKNOWN, OBSERVED, ["good behaviour not computed"])
    if good_length >= k:
        return Hypothesis(HOLDS, OBSERVED)
    return Hypothesis(FAILS, OBSERVED,
                      [f"good behaviour observed modulo only {good_length} of {k} elements"])


def _closed(closure: ClosureStatus | None) -> Hypothesis:
    if closure is None or closure.closed is None:
        return Hypothesis(UNKNOWN, OBSERVED, ["integral closedness unknown"])
    if closure.closed:
        return Hypothesis(HOLDS, closure.grade)
    return Hypothesis(FAILS, CERTIFIED, [f"I is not integrally closed (witness {closure.witness})"])


def evaluate_bounds(profile: HilbertProfile, filtration: FiltrationReport | None,
                    red: Reduction | None, closure: ClosureStatus | None, *,
                    pinned: Reduction | None = None,
                    good_length: int | None = None,
                    depth: DepthProbe | None = None,
                    tilde_depth: DepthProbe | None = None,
                    vn: VnCheck | None = None) -> TheoremVerdicts:
    """Evaluate every predicate on exact integers.

    ``good_length`` is the length of the longest prefix of the superficial
    sequence modulo which the Ratliff-Rush filtration was observed to behave
    well; ``depth``/``tilde_depth`` are Valabrega-Valla probes for G_I(A) and
    the associated graded ring of the Ratliff-Rush filtration.
    """
    if profile is None:
        raise VerdictError("missing Hilbert profile")
    d = profile.dimension
    e = list(profile.coefficients) + [0] * 4
    ell = profile.H(1)
    e0, e1, e2, e3 = e[0], e[1], e[2], e[3]
    ecl = e2 - e1 + e0 - ell  # the integrally-closed factor
    rossi = e1 - e0 + ell + 1
    out = TheoremVerdicts()
    add = out.verdicts.append

    d3 = _fact(d >= 3, f"dimension {d} < 3")
    closed = _closed(closure)
    boundary_f = _fact(e3 == e2 * (e2 - 1), f"e3 = {e3} differs from e2(e2-1) = {e2 * (e2 - 1)}")
    boundary_c = _all_of(closed, _fact(e3 == e2 * ecl, f"e3 = {e3} differs from e2*{ecl} = {e2 * ecl}"))
    vanish = _fact(all(e[k] == 0 for k in range(4, d + 1)),
                   "some e_k with 4 <= k <= d is nonzero")
    thm51 = _all_of(d3, _any_of(boundary_f, boundary_c), vanish)

    # the two e3 bounds and their error terms
    add(_verdict("thm-4.1-filtration", "e3 <= e2(e2-1)", d3, e3 <= e2 * (e2 - 1),
                 {"e2": e2, "e3": e3, "bound": e2 * (e2 - 1), "error_term": e2 * (e2 - 1) - e3}))
    add(_verdict("thm-4.1-integrally-closed", "e3 <= e2(e2-e1+e0-l(A/I))", _all_of(d3, closed),
                 e3 <= e2 * ecl,
                 {"e0": e0, "e1": e1, "e2": e2, "e3": e3, "length": ell, "factor": ecl,
                  "bound": e2 * ecl, "error_term": e2 * ecl - e3}))
    if d == 3 and filtration is not None:
        eq = _all_of(d3, _any_of(boundary_f, boundary_c))
        value = None if tilde_depth is None else tilde_depth.depth_lower_bound >= 2
        notes = [] if tilde_depth is not None else ["no depth probe for the Ratliff-Rush filtration"]
        v = _verdict("thm-4.1-equality-depth", "equality in an e3 bound => depth G~ >= 2",
                     eq, value, {"tilde_depth_observed": None if tilde_depth is None
                                 else tilde_depth.depth_lower_bound}, notes)
        if v.conclusion == FAILS:
            # a probe only bounds depth from below, so a short probe is not a disproof
            v.conclusion = NOT_EVALUATED
            v.notes.append("probe reached less than 2; lower bounds cannot refute the claim")
        add(v)

    # sign conditions in dimension >= 4
    d4 = _fact(d >= 4, f"dimension {d} < 4")
    hyp = _all_of(d4, _any_of(boundary_f, boundary_c))
    signs = {}
    ok = True
    if d >= 4:
        signs["e4"] = e[4]
        ok = e[4] >= 0
        for i in range(5, d + 1):
            if all(e[k] == 0 for k in range(4, i)):
                signs[f"e{i}"] = e[i]
                ok = ok and (-1) ** i * e[i] >= 0
    v = _verdict("thm-4.4-signs", "e3 on the boundary => (-1)^i e_i >= 0 once e_4..e_{i-1} vanish",
                 hyp, ok if d >= 4 else None,
                 {"e2": e2, "e3": e3, "e2(e2-1)": e2 * (e2 - 1),
                  "boundary_equality": e3 == e2 * (e2 - 1), **signs,
                  "e4_positive": d >= 4 and e[4] > 0})
    if d >= 4 and e3 == e2 * (e2 - 1) and e[4] > 0:
        v.notes.append("e3 = e2(e2-1) and e4 > 0")
    add(v)

    # Marley-type sign conditions under good behaviour
    gb = _all_of(d3, _good_at_least(good_length, d - 2))
    nonneg = all(e[i] >= 0 for i in range(d + 1))
    chain = all(all(e[j] == 0 for j in range(i, d + 1)) for i in range(d + 1) if e[i] == 0)
    alt = (-1) ** d * (sum((-1) ** i * e[i] for i in range(d + 1)) - ell)
    numbers = {"nonnegative": nonneg, "zero_propagation": chain, "alternating_sum": alt}
    value = nonneg and chain
    notes = []
    if closed.status == HOLDS:
        value = value and alt >= 0
    else:
        notes.append("alternating-sum part skipped: integral closedness not established")
    add(_verdict("thm-3.3-signs", "e_i >= 0; e_i = 0 => e_j = 0 (j >= i); closed => alternating sum >= 0",
                 gb, value, numbers, notes))

    # good behaviour for integrally closed ideals on the boundary
    hyp = _all_of(_fact(d >= 2, f"dimension {d} < 2"), closed,
                  _fact(e2 == e1 - e0 + ell, f"e2 = {e2} differs from e1-e0+l = {e1 - e0 + ell}"),
                  _fact(all(e[k] == 0 for k in range(3, d + 1)), "some e_k with 3 <= k <= d is nonzero"))
    add(_verdict("thm-3.6-good-behaviour", "closed, e2 = e1-e0+l, e_k = 0 (k >= 3) => good behaviour mod d-1",
                 hyp, None if good_length is None else good_length >= d - 1,
                 {"good_length": good_length, "required": d - 1}))

    # reduction-number predicates, once per reduction
    reds = [("", red)] + ([("@pinned", pinned)] if pinned is not None else [])
    for suffix, R in reds:
        if R is None:
            continue
        member = _fact(R.contained, "J is not contained in I")
        base = _any_of(
            _fact(d <= 2, ""),
            _fact(rossi == 2, ""),  # e1 - e0 + l(A/I) = 1
            _depth_at_least(depth, d - 2, "G_I(A)") if d >= 3 else Hypothesis(FAILS),
            _all_of(d3, _good_at_least(good_length, d - 2)),
            thm51,
        )
        if base.status != HOLDS and not base.reasons:
            base.reasons = ["none of the sufficient conditions for Rossi's bound was established"]
        add(_verdict("rossi-bound" + suffix, "r_J <= e1-e0+l(A/I)+1", _all_of(member, base),
                     R.r <= rossi, {"r": R.r, "bound": rossi, "slack": rossi - R.r}))
        depth_d3 = _all_of(d3, member, _depth_at_least(depth, d - 3, "G_I(A)"))
        b12 = rossi + e2 * (e2 - 1) - e3
        add(_verdict("eq-1.2-bound" + suffix, "r_J <= e1-e0+l+1+(e2-1)e2-e3", depth_d3, R.r <= b12,
                     {"r": R.r, "bound": b12}))
        b13 = rossi + e2 * ecl - e3
        add(_verdict("eq-1.3-bound" + suffix, "r_J <= e1-e0+l+1+e2(e2-e1+e0-l)-e3",
                     _all_of(depth_d3, closed), R.r <= b13, {"r": R.r, "bound": b13}))
        if R.r_tilde is not None:
            hyp = _all_of(member, _any_of(_fact(d == 2, ""), thm51))
            add(_verdict("thm-5.1-rtilde" + suffix, "r~_J <= r_J", hyp, R.r_tilde <= R.r,
                         {"r": R.r, "r_tilde": R.r_tilde}))
        if filtration is not None:
            gap_sum = sum(g for _, g in filtration.gaps)
            r = R.r
            tight = filtration.gap(r) == 0 if r >= 1 else True
            # rho is counted from n = 1, so r_J = 0 bounds it by 1
            bound = max(r if tight else r + gap_sum, 1)
            later = next((n for n in range(max(r, 1), filtration.gaps[-1][0] + 2)
                          if filtration.gap(n) == 0), None)
            add(_verdict("thm-5.1-rho" + suffix,
                         "rho <= r_J if I~^r = I^r, else rho <= r_J + (-1)^(d+1)(e_{d+1} - e~_{d+1})",
                         _all_of(member, thm51), filtration.rho <= bound and
                         (later is None or filtration.rho <= later),
                         {"rho": filtration.rho, "r": r, "closed_at_r": tight, "gap_sum": gap_sum,
                          "bound": bound, "first_closed_from_r": later}))

    # V_n formula
    if vn is not None:
        hyp = _any_of(_fact(d <= 2, ""), _all_of(d3, _good_at_least(good_length, d - 2)),
                      _depth_at_least(tilde_depth, d - 1, "G~"))
        add(_verdict("eq-3.1-vn", "e_i = sum_{n >= i-1} C(n, i-1) V_n", hyp, vn.all_zero,
                     {"V": [v for _, v in vn.values], "residuals": dict(vn.residuals),
                      "e0_residual": vn.e0_residual}))

    # the gap identity
    if filtration is not None and filtration.tilde_profile is not None:
        et = filtration.tilde_profile.coefficients
        gap_sum = sum(g for _, g in filtration.gaps)
        diff = (-1) ** (d + 1) * (e[d + 1] - et[d + 1])
        add(_verdict("eq-3.4-gap-sum", "sum_n l(I~^n/I^n) = (-1)^(d+1)(e_{d+1} - e~_{d+1})",
                     Hypothesis(HOLDS, OBSERVED), gap_sum == diff and et[: d + 1] == e[: d + 1],
                     {"gap_sum": gap_sum, "signed_difference": diff, "e_next": e[d + 1],
                      "e_tilde_next": et[d + 1]}))
    return out
