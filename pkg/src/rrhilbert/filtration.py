"""Ratliff-Rush closures of powers, gap lengths and the stability index.

The closure of I^n is the stable value of the ascending chain
L_k = (I^{n+k} : I^k).  Since (I^{n+k} : I^k) = ((I^{n+k} : I^{k-1}) : I),
every chain member is one colon by I away from a member of the chain for
n+1, so all chains share one table of iterated colons.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .hilbert import (
    DEFAULT_GUARD,
    DEFAULT_POWER_BUDGET,
    DEFAULT_REVALIDATE,
    BudgetExceeded,
    HilbertProfile,
    hilbert_profile,
    hilbert_samuel,
)
from .ideal import Ideal

DEFAULT_CONFIRM_STEPS = 2
DEFAULT_K_BUDGET = 10
DEFAULT_WINDOW = 4


class FiltrationError(RuntimeError):
    """An invariant of the closure computation was violated."""


@dataclass
class ClosureCertificate:
    n: int
    stable_step: int  # K: first k with L_K = ... = L_{K+c}
    confirm_steps: int
    chain_lengths: list  # ℓ(A/L_k) for k = 0, 1, ...
    power_contained: bool  # I^n ⊆ L
    product_check: bool  # L * I^m ⊆ I^{n+m} with m = K + c, by normal forms
    grade: str = "certified-subset/observed-equal"


@dataclass
class FiltrationReport:
    closures: list  # (n, Ideal, K)
    gaps: list  # (n, ℓ(Ĩ^n / I^n))
    rho: int
    window: int
    certificates: list
    tilde_profile: HilbertProfile | None = None
    notes: list = field(default_factory=list)

    def gap(self, n: int) -> int:
        for k, g in self.gaps:
            if k == n:
                return g
        if n > self.gaps[-1][0]:
            return 0  # beyond the observed stability window
        raise KeyError(n)

    def closure(self, n: int) -> Ideal:
        for k, ideal, _ in self.closures:
            if k == n:
                return ideal
        raise KeyError(n)


class RatliffRush:
    """Closure engine for one ideal; results are cached on the ideal."""

    def __init__(self, ideal: Ideal, confirm_steps: int = DEFAULT_CONFIRM_STEPS,
                 k_budget: int = DEFAULT_K_BUDGET):
        if confirm_steps < 1:
            raise ValueError("confirm_steps must be positive")
        self.ideal = ideal
        self.confirm_steps = confirm_steps
        self.k_budget = k_budget
        memo = ideal._memo.setdefault("rr-colons", {})
        self._colons: dict = memo  # (m, j) -> (I^m : I^j)
        self._closures: dict = ideal._memo.setdefault(("rr", confirm_steps, k_budget), {})

    def colon_power(self, m: int, j: int) -> Ideal:
        """(I^m : I^j), by j successive colons with I."""
        if j == 0:
            return self.ideal.power(m)
        key = (m, j)
        if key not in self._colons:
            if j >= m:
                self._colons[key] = Ideal(self.ideal.ring, [self.ideal.ring.one()])
            else:
                self._colons[key] = self.colon_power(m, j - 1).colon(self.ideal)
        return self._colons[key]

    def closure(self, n: int):
        """``(Ĩ^n, certificate)``."""
        if n in self._closures:
            return self._closures[n]
        I = self.ideal
        if n == 0:
            unit = Ideal(I.ring, [I.ring.one()])
            cert = ClosureCertificate(0, 0, self.confirm_steps, [0], True, True)
            self._closures[0] = (unit, cert)
            return self._closures[0]
        c = self.confirm_steps
        chain = [I.power(n)]
        lengths = [chain[0].quotient_length()]
        streak = 0
        k = 0
        while streak < c:
            k += 1
            if k > self.k_budget:
                raise BudgetExceeded(
                    f"Ratliff-Rush chain for n = {n} not confirmed within k <= {self.k_budget} "
                    "(inconclusive)",
                    stage="ratliff-rush",
                    flag="--k-budget",
                )
            L = self.colon_power(n + k, k)
            if not chain[-1].issubset(L):
                raise FiltrationError(f"colon chain for n = {n} is not ascending at k = {k}")
            lengths.append(L.quotient_length())
            streak = streak + 1 if lengths[-1] == lengths[-2] else 0
            chain.append(L)
        K = k - c
        closed = chain[-1]
        m = K + c
        cert = ClosureCertificate(
            n=n,
            stable_step=K,
            confirm_steps=c,
            chain_lengths=lengths,
            power_contained=I.power(n).issubset(closed),
            product_check=self._product_check(closed, n, m),
        )
        if not (cert.power_contained and cert.product_check):
            raise FiltrationError(f"closure certificate failed for n = {n}")
        self._closures[n] = (closed, cert)
        return self._closures[n]

    def _product_check(self, L: Ideal, n: int, m: int) -> bool:
        """Every extra generator of L times every generator of I^m lies in
        I^{n+m}; checked by normal forms, independently of the colon."""
        I = self.ideal
        In = I.power(n)
        target = I.power(n + m)
        extra = [g for g in L.groebner_basis() if not In.contains(g)]
        gens = I.power(m).own_generators
        return all(target.contains(g * h) for g in extra for h in gens)

    def gap(self, n: int) -> int:
        if n == 0:
            return 0
        closed, _ = self.closure(n)
        return hilbert_samuel(self.ideal, n) - closed.quotient_length()


def ratliff_rush(ideal: Ideal, n: int, confirm_steps: int = DEFAULT_CONFIRM_STEPS,
                 k_budget: int = DEFAULT_K_BUDGET):
    """Ĩ^n with its ClosureCertificate."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return RatliffRush(ideal, confirm_steps, k_budget).closure(n)


def stability_index(ideal: Ideal, window: int = DEFAULT_WINDOW, *,
                    confirm_steps: int = DEFAULT_CONFIRM_STEPS,
                    k_budget: int = DEFAULT_K_BUDGET,
                    max_n: int = DEFAULT_POWER_BUDGET):
    """Observed ρ: least n with zero gaps on all of [n, n + window].

    Returns ``(rho, gaps)`` where gaps lists (k, ℓ(Ĩ^k/I^k)) for k = 1 .. rho + window.
    """
    if window < 1:
        raise ValueError("window must be positive")
    eng = RatliffRush(ideal, confirm_steps, k_budget)
    gaps = []
    start = 1
    n = 0
    while True:
        n += 1
        if n > max_n + window:
            raise BudgetExceeded(
                f"gaps persist through n = {n - 1}; stability window not reached",
                stage="stability-index",
                flag="--power-budget",
            )
        g = eng.gap(n)
        gaps.append((n, g))
        if g:
            start = n + 1
        elif n - start >= window:
            return start, gaps


def tilde_lengths(ideal: Ideal, gaps: list):
    """Length function n -> ℓ(A/Ĩ^n), using zero gaps past the observed range."""
    table = dict(gaps)
    last = max(table) if table else 0

    def lengths(n: int) -> int:
        g = table.get(n, 0) if n <= last else 0
        return hilbert_samuel(ideal, n) - g

    return lengths


def tilde_filtration_profile(ideal: Ideal, gaps: list | None = None, *,
                             window: int = DEFAULT_WINDOW,
                             guard: int = DEFAULT_GUARD,
                             revalidate: int = DEFAULT_REVALIDATE,
                             budget: int = DEFAULT_POWER_BUDGET,
                             confirm_steps: int = DEFAULT_CONFIRM_STEPS,
                             k_budget: int = DEFAULT_K_BUDGET) -> HilbertProfile:
    """HilbertProfile of the filtration {Ĩ^n}."""
    if gaps is None:
        _, gaps = stability_index(ideal, window, confirm_steps=confirm_steps,
                                  k_budget=k_budget, max_n=budget)
    return hilbert_profile(tilde_lengths(ideal, gaps), ideal.ring.dimension, guard=guard,
                           revalidate=revalidate, budget=budget, label="H~")


def filtration_report(ideal: Ideal, *, window: int = DEFAULT_WINDOW,
                      confirm_steps: int = DEFAULT_CONFIRM_STEPS,
                      k_budget: int = DEFAULT_K_BUDGET,
                      budget: int = DEFAULT_POWER_BUDGET,
                      guard: int = DEFAULT_GUARD,
                      revalidate: int = DEFAULT_REVALIDATE,
                      through: int = 0) -> FiltrationReport:
    """Closures through max(ρ + window, ``through``), gaps, ρ and the tilde profile."""
    eng = RatliffRush(ideal, confirm_steps, k_budget)
    rho, gaps = stability_index(ideal, window, confirm_steps=confirm_steps,
                                k_budget=k_budget, max_n=budget)
    top = max(gaps[-1][0], through)
    for n in range(gaps[-1][0] + 1, top + 1):
        gaps.append((n, eng.gap(n)))
    closures, certs = [], []
    prev = None
    for n in range(1, top + 1):
        closed, cert = eng.closure(n)
        if prev is not None and not closed.issubset(prev):
            raise FiltrationError(f"closures are not descending at n = {n}")
        prev = closed
        closures.append((n, closed, cert.stable_step))
        certs.append(cert)
    report = FiltrationReport(closures, gaps, rho, window, certs)
    report.tilde_profile = tilde_filtration_profile(
        ideal, gaps, guard=guard, revalidate=revalidate, budget=budget
    )
    report.notes.append(
        f"rho observed on the window [{rho}, {rho + window}]; gaps beyond n = {top} taken as 0"
    )
    return report
