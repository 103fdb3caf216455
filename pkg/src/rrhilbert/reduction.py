"""Minimal reductions, reduction numbers, superficial elements and depth probes.

Every "for all n" statement is checked on a finite window of degrees and is
reported as observed evidence.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .filtration import DEFAULT_WINDOW, RatliffRush, stability_index
from .hilbert import DEFAULT_POWER_BUDGET, BudgetExceeded, profile
from .ideal import Ideal
from .linalg import SparseEchelon
from .ring import Polynomial, Ring

DEFAULT_RETRIES = 5
DEFAULT_COEFF_BOUND = 7


class ReductionError(ValueError):
    pass


@dataclass
class Reduction:
    J: Ideal
    seed: int | None
    r: int
    evidence: list  # (n, I^{n+1} == J I^n)
    r_tilde: int | None = None
    tilde_evidence: list = field(default_factory=list)
    attempts: int = 1
    pinned: bool = False
    contained: bool = True  # J ⊆ I

    @property
    def verified_range(self) -> int:
        return max(n for n, _ in self.evidence) if self.evidence else self.r


@dataclass
class SuperficialCertificate:
    x: Polynomial
    window: tuple  # (n0, n1)
    checks: list  # (n, (I^{n+1} : x) == I^n)
    coefficients: tuple = ()  # (e_i(I) for i < d, e_i(I mod x) for i < d)
    passed: bool = False
    reason: str = ""


@dataclass
class DepthProbe:
    sequence: list
    depth_lower_bound: int
    checks: list  # (i, n, passed)
    filtration: str = "I-adic"


# -- random combinations -------------------------------------------------------
def _draw(rng: random.Random, ring: Ring, bound: int):
    p = ring.field.p
    if p:
        return rng.randrange(1, p)
    c = 0
    while c == 0:
        c = rng.randint(-bound, bound)
    return c


def random_combination(gens: Sequence[Polynomial], rng: random.Random, bound: int = DEFAULT_COEFF_BOUND):
    ring = gens[0].ring
    acc = ring.zero()
    for g in gens:
        acc = acc + g.scale(ring.field(_draw(rng, ring, bound)))
    return acc


# -- reduction numbers ----------------------------------------------------------
def _products(J: Ideal, F: Ideal) -> list[Polynomial]:
    return [j * f for j in J.own_generators for f in F.own_generators]


def _maximal_ideal(ring: Ring) -> Ideal:
    return Ideal(ring, ring.gens())


def _m_times(target: Ideal) -> Ideal:
    memo = target._memo
    if "m*" not in memo:
        memo["m*"] = _maximal_ideal(target.ring) * target
    return memo["m*"]


def locally_equal_product(target: Ideal, J: Ideal, F: Ideal, contained: bool = False) -> bool:
    """Whether target = J*F holds in the local ring at the origin.

    By Nakayama this holds iff J*F ⊆ target and the products j*f span
    target/m*target, a space of dimension ℓ(A/m*target) - ℓ(A/target).
    Pass ``contained=True`` when J*F ⊆ target is already known.
    """
    prods = _products(J, F)
    if not contained and not all(target.contains(p) for p in prods):
        return False
    mt = _m_times(target)
    need = mt.quotient_length() - target.quotient_length()
    red = mt.reducer
    ech = SparseEchelon(target.ring.field)
    for p in prods:
        if len(ech) == need:
            break
        r = red.reduce(p.terms)
        if r:
            ech.add(r)
    return len(ech) == need


def reduction_step(ideal: Ideal, J: Ideal, n: int, contained: bool = False) -> bool:
    """I^{n+1} = J I^n locally (n >= 0)."""
    F = ideal.power(n) if n else Ideal(ideal.ring, [ideal.ring.one()])
    return locally_equal_product(ideal.power(n + 1), J, F, contained)


def reduction_number(ideal: Ideal, J: Ideal, bound: int = DEFAULT_POWER_BUDGET,
                     window: int = DEFAULT_WINDOW, require_containment: bool = False):
    """Least r with I^{r+1} = J I^r, plus the window r+1 .. r+window.

    A J outside I is allowed (the equalities still make sense); callers
    record containment separately.

    Returns ``(r, evidence)``; raises BudgetExceeded when no r <= bound works.
    """
    if require_containment and not J.issubset(ideal):
        raise ReductionError("J is not contained in I")
    contained = J.issubset(ideal)
    evidence = []
    r = None
    for n in range(0, bound + 1):
        ok = reduction_step(ideal, J, n, contained)
        evidence.append((n, ok))
        if ok:
            r = n
            break
    if r is None:
        raise BudgetExceeded(
            f"not a reduction within bound {bound}", stage="reduction", flag="--power-budget"
        )
    for n in range(r + 1, r + window + 1):
        ok = reduction_step(ideal, J, n, contained)
        evidence.append((n, ok))
        if not ok:
            raise ReductionError(f"I^{n + 1} != J I^{n} after I^{r + 1} = J I^{r}")
    return r, evidence


def random_minimal_reduction(ideal: Ideal, seed: int, *, bound: int = DEFAULT_POWER_BUDGET,
                             window: int = DEFAULT_WINDOW, retries: int = DEFAULT_RETRIES,
                             coeff_bound: int = DEFAULT_COEFF_BOUND) -> Reduction:
    """d random combinations of the generators, accepted once r_J is found."""
    ring = ideal.ring
    d = ring.dimension
    gens = list(ideal.own_generators)
    if not gens:
        raise ReductionError("ideal is zero")
    rng = random.Random(seed)
    last = None
    for attempt in range(1, retries + 1):
        J = Ideal(ring, [random_combination(gens, rng, coeff_bound) for _ in range(d)])
        try:
            r, ev = reduction_number(ideal, J, bound, window)
        except (BudgetExceeded, ReductionError) as exc:
            last = exc
            continue
        return Reduction(J, seed, r, ev, attempts=attempt)
    raise BudgetExceeded(
        f"no reduction found in {retries} random draws ({last}); raise the bound or change the seed",
        stage="reduction",
        flag="--seed",
    )


def pinned_reduction(ideal: Ideal, J: Ideal, *, bound: int = DEFAULT_POWER_BUDGET,
                     window: int = DEFAULT_WINDOW) -> Reduction:
    r, ev = reduction_number(ideal, J, bound, window)
    return Reduction(J, None, r, ev, pinned=True, contained=J.issubset(ideal))


def tilde_reduction_number(ideal: Ideal, J: Ideal, closure: Callable[[int], Ideal], top: int,
                           rho: int | None = None):
    """Least r with Ĩ^{n+1} = J Ĩ^n for every n in [r, top].

    ``closure(n)`` returns Ĩ^n.  For n >= ``rho`` both sides are ordinary
    powers and the I-adic test is reused.  Returns ``(r_tilde, evidence)``.
    """
    ring = ideal.ring
    contained = J.issubset(ideal)
    evidence = []
    for n in range(0, top + 1):
        if rho is not None and n >= rho:
            ok = reduction_step(ideal, J, n, contained)
        else:
            lhs = closure(n + 1)
            F = closure(n) if n else Ideal(ring, [ring.one()])
            ok = locally_equal_product(lhs, J, F, contained)
        evidence.append((n, ok))
    r = top + 1
    for n, ok in reversed(evidence):
        if not ok:
            break
        r = n
    if r > top:
        raise BudgetExceeded(
            f"Ĩ^(n+1) != J Ĩ^n at the top of the checked range n = {top}",
            stage="tilde-reduction",
            flag="--window",
        )
    return r, evidence


# -- superficial elements -------------------------------------------------------
def quotient_by(ring: Ring, elements: Sequence[Polynomial]) -> Ring:
    """The ring with ``elements`` added to its relations (cached per ring)."""
    memo = ring.__dict__.setdefault("_quotients", {})
    key = tuple(str(e) for e in elements)
    if key not in memo:
        memo[key] = ring.with_relations(list(elements), dimension=ring.dimension - len(elements))
    return memo[key]


def image(ideal: Ideal, ring: Ring) -> Ideal:
    """Image of ``ideal`` in a quotient ring built by quotient_by."""
    return ideal.in_quotient(ring)


def is_superficial(x: Polynomial, ideal: Ideal, window: int = DEFAULT_WINDOW, *,
                   start: int | None = None, check_coefficients: bool = True,
                   **hilbert_kw) -> SuperficialCertificate:
    """Check (I^{n+1} : x) = I^n for n in [start, start + window].

    ``start`` defaults to ρ(I) + 1.  The inclusion (I^{n+1} : x) ⊆ Ĩ^n makes the
    check meaningful from ρ on.  Also compares e_0 .. e_{d-1} with I mod x.
    """
    if not ideal.contains(x):
        raise ReductionError("x is not in I")
    if start is None:
        rho, _ = stability_index(ideal, window)
        start = rho + 1
    cert = SuperficialCertificate(x, (start, start + window), [])
    if not x or ideal.ring.dimension == 0:
        cert.reason = "zero element" if not x else "dimension zero"
        return cert
    if ideal.ring.relations and not ideal.ring.ambient_reducer.reduce(x.terms, full=False):
        cert.reason = "zero element"
        return cert
    for n in range(start, start + window + 1):
        ok = ideal.power(n + 1).colon(x).equals(ideal.power(n))
        cert.checks.append((n, ok))
        if not ok:
            cert.reason = f"(I^{n + 1} : x) != I^{n}"
            return cert
    if check_coefficients:
        d = ideal.ring.dimension
        e = profile(ideal, **hilbert_kw).coefficients[:d]
        sub = quotient_by(ideal.ring, [x])
        e2 = profile(image(ideal, sub), **hilbert_kw).coefficients[:d]
        cert.coefficients = (tuple(e), tuple(e2))
        if e != e2:
            cert.reason = "Hilbert coefficients change modulo x"
            return cert
    cert.passed = True
    return cert


def superficial_sequence(ideal: Ideal, s: int, seed: int, *, window: int = DEFAULT_WINDOW,
                         retries: int = DEFAULT_RETRIES, start_hint: int = 0,
                         coeff_bound: int = DEFAULT_COEFF_BOUND, **hilbert_kw):
    """Elements x_1..x_s, each certified superficial for the image of I in
    A/(x_1..x_{i-1}).  Returns the list of certificates."""
    d = ideal.ring.dimension
    if s < 0 or s > d:
        raise ValueError("sequence length must lie in [0, d]")
    rng = random.Random(seed)
    certs = []
    cur = ideal
    for stage in range(s):
        rho, _ = stability_index(cur, window)
        start = max(rho, start_hint) + 1
        gens = list(cur.own_generators)
        cert = None
        for _ in range(retries):
            x = random_combination(gens, rng, coeff_bound)
            cert = is_superficial(x, cur, window, start=start, **hilbert_kw)
            if cert.passed:
                break
        if cert is None or not cert.passed:
            raise BudgetExceeded(
                f"no superficial element found at stage {stage + 1} in {retries} draws",
                stage="superficial",
                flag="--seed",
            )
        certs.append(cert)
        cur = image(cur, quotient_by(cur.ring, [cert.x]))
    return certs


# -- good behaviour and depth --------------------------------------------------
def good_behaviour_mod(ideal: Ideal, x: Polynomial, window: int = DEFAULT_WINDOW, *,
                       top: int | None = None, confirm_steps: int = 2, k_budget: int = 10):
    """Compare Ĩ^n A' with the closure of (I A')^n in A' = A/(x).

    Degrees 1 .. top are compared (default: the larger observed ρ plus the
    window).  Returns ``(all_equal, [(n, equal)])``.
    """
    sub = quotient_by(ideal.ring, [x])
    I2 = image(ideal, sub)
    up = RatliffRush(ideal, confirm_steps, k_budget)
    down = RatliffRush(I2, confirm_steps, k_budget)
    if top is None:
        rho1, _ = stability_index(ideal, window, confirm_steps=confirm_steps, k_budget=k_budget)
        rho2, _ = stability_index(I2, window, confirm_steps=confirm_steps, k_budget=k_budget)
        top = max(rho1, rho2) + window
    evidence = []
    for n in range(1, top + 1):
        left = image(up.closure(n)[0], sub)
        right = down.closure(n)[0]
        evidence.append((n, left.equals(right)))
    return all(ok for _, ok in evidence), evidence


def good_behaviour_sequence(ideal: Ideal, sequence: Sequence[Polynomial],
                            window: int = DEFAULT_WINDOW, **kw):
    """Good behaviour modulo x_1, then of the image modulo x_2, and so on."""
    evidence = []
    cur = ideal
    for i, x in enumerate(sequence, start=1):
        ok, ev = good_behaviour_mod(cur, x, window, **kw)
        evidence.append((i, ev))
        if not ok:
            return False, evidence
        cur = image(cur, quotient_by(cur.ring, [x]))
    return True, evidence


def vv_depth_probe(ideal: Ideal, sequence: Sequence[Polynomial], degrees: Sequence[int], *,
                   filtration: Callable[[int], Ideal] | None = None,
                   label: str = "I-adic", method: str = "colon") -> DepthProbe:
    """Largest i such that x_1*, ..., x_i* behave as a regular sequence on
    the associated graded ring, checked on ``degrees``.

    With ``method="colon"`` stage i checks (F_n : x_i) = F_{n-1} in
    A/(x_1..x_{i-1}), which is equivalent to the Valabrega-Valla equality
    (x_1..x_i) ∩ F_n = (x_1..x_i) F_{n-1} once stages 1..i-1 passed.
    ``method="intersection"`` checks that equality directly in A.
    """
    F = filtration or ideal.power
    checks = []
    depth = 0
    ring = ideal.ring
    for i in range(1, len(sequence) + 1):
        xs = list(sequence[:i])
        if method == "colon":
            sub = quotient_by(ring, xs[:-1]) if i > 1 else ring
            x = xs[-1].change_ring(sub)

            def Fn(n, sub=sub):
                return image(F(n), sub) if n else Ideal(sub, [sub.one()])
        stage_ok = True
        for n in degrees:
            if n < 1:
                continue
            if method == "colon":
                ok = Fn(n).colon(x).equals(Fn(n - 1))
            else:
                X = Ideal(ring, xs)
                prev = F(n - 1) if n > 1 else Ideal(ring, [ring.one()])
                ok = X.intersection(F(n)).equals(X * prev)
            checks.append((i, n, ok))
            if not ok:
                stage_ok = False
                break
        if not stage_ok:
            break
        depth = i
    return DepthProbe(list(sequence), depth, checks, label)
