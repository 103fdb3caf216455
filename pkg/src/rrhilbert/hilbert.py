"""Hilbert-Samuel functions, series numerators and Hilbert coefficients.

Coefficients are computed twice: from derivatives of the numerator at 1 and
from an exact binomial-basis fit of the sampled lengths.  The two must agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable

from .ideal import Ideal

DEFAULT_GUARD = 3
DEFAULT_REVALIDATE = 2
DEFAULT_POWER_BUDGET = 12


class HilbertError(ArithmeticError):
    pass


class BudgetExceeded(HilbertError):
    """A stage needed more samples (powers, colon steps) than allowed."""

    def __init__(self, message: str, stage: str = "", flag: str = ""):
        super().__init__(message)
        self.stage = stage
        self.flag = flag


class NotMPrimaryError(HilbertError):
    pass


def binom(n: int, k: int) -> int:
    """C(n, k) extended by zero for n < k or negative arguments."""
    if k < 0 or n < k or n < 0:
        return 0
    return comb(n, k)


def hilbert_polynomial_value(e: list[int], d: int, n: int) -> int:
    """P(n) = sum_{j<=d} (-1)^j e_j C(n+d-1-j, d-j)."""
    return sum((-1) ** j * e[j] * binom(n + d - 1 - j, d - j) for j in range(d + 1))


def second_polynomial_value(e: list[int], d: int, n: int) -> int:
    """P2(n) = sum_{j<=d+1} (-1)^j e_j C(n+d+1-j, d+1-j)."""
    return sum((-1) ** j * e[j] * binom(n + d + 1 - j, d + 1 - j) for j in range(d + 2))


def coefficients_from_numerator(h: list[int], count: int) -> list[int]:
    """e_i = h^(i)(1)/i! = sum_k h_k C(k, i)."""
    return [sum(hk * binom(k, i) for k, hk in enumerate(h)) for i in range(count)]


def series_coefficient(h: list[int], d: int, n: int) -> int:
    """Coefficient of t^n in h(t)/(1-t)^d."""
    if d == 0:
        return h[n] if n < len(h) else 0
    return sum(hk * binom(n - k + d - 1, d - 1) for k, hk in enumerate(h) if k <= n)


def _solve(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(rows)
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise HilbertError("singular system in binomial fit")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [v * inv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def fit_binomial_basis(samples: dict[int, int], d: int, points: list[int]) -> list[int]:
    """Solve H(n) = sum (-1)^j e_j C(n+d-1-j, d-j) exactly on ``points``."""
    rows = [[Fraction((-1) ** j * binom(n + d - 1 - j, d - j)) for j in range(d + 1)] for n in points]
    sol = _solve(rows, [Fraction(samples[n]) for n in points])
    out = []
    for v in sol:
        if v.denominator != 1:
            raise HilbertError("binomial fit produced a non-integer coefficient")
        out.append(int(v))
    return out


@dataclass
class HilbertProfile:
    """Hilbert data of a filtration with d-dimensional quotients."""

    dimension: int
    samples: list  # (n, H(n)) for n = 0..N
    numerator: list
    coefficients: list  # e_0 .. e_{d+1}, numerator route
    fitted: list  # e_0 .. e_d, binomial-fit route
    threshold: int  # least sampled n from which H(n) = P(n)
    second_threshold: int  # least sampled n from which H2(n) = P2(n)
    notes: list = field(default_factory=list)

    def H(self, n: int) -> int:
        return dict(self.samples)[n]

    def polynomial(self, n: int) -> int:
        return hilbert_polynomial_value(self.coefficients, self.dimension, n)

    def second_polynomial(self, n: int) -> int:
        return second_polynomial_value(self.coefficients, self.dimension, n)

    def second_values(self) -> list:
        """(n, H2(n)) for every n whose prefix sum is covered by the samples."""
        vals = dict(self.samples)
        out, acc = [], 0
        for n in range(0, max(vals)):
            acc += vals[n + 1]
            out.append((n, acc))
        return out


def hilbert_profile(
    lengths: Callable[[int], int],
    d: int,
    *,
    guard: int = DEFAULT_GUARD,
    revalidate: int = DEFAULT_REVALIDATE,
    budget: int = DEFAULT_POWER_BUDGET,
    label: str = "H",
) -> HilbertProfile:
    """Profile of the length function ``lengths(n) = ℓ(A/I_n)``.

    Differences c_n = H(n+1) - H(n) are multiplied by (1-t)^d until ``guard``
    consecutive transformed coefficients vanish; the candidate numerator is
    then checked against ``revalidate`` fresh samples.
    """
    if guard < 2:
        raise ValueError("guard must be at least 2")
    if d < 0:
        raise ValueError("dimension must be non-negative")
    H: dict[int, int] = {0: 0}

    def sample(n: int) -> int:
        if n not in H:
            if n > budget:
                raise BudgetExceeded(
                    f"{label}: stabilization needs n = {n} beyond the sample budget {budget}",
                    stage="hilbert",
                    flag="--power-budget",
                )
            H[n] = lengths(n)
        return H[n]

    signs = [(-1) ** i * comb(d, i) for i in range(d + 1)]
    c: list[int] = []
    h: list[int] = []
    k = 0
    while True:
        c.append(sample(k + 1) - sample(k))
        h.append(sum(signs[i] * c[k - i] for i in range(d + 1) if k - i >= 0))
        k += 1
        if len(h) < guard or any(h[-guard:]):
            continue
        num = h[:-guard]
        while num and num[-1] == 0:
            num.pop()
        # fresh samples must follow the candidate series
        ok = True
        for extra in range(revalidate):
            n = k + extra
            if sample(n + 1) - sample(n) != series_coefficient(num, d, n):
                ok = False
                break
        if ok:
            break
    numerator = num
    if not numerator:
        raise NotMPrimaryError(f"{label}: zero Hilbert series (unit ideal?)")
    if any(series_coefficient(numerator, d, n) != H[n + 1] - H[n] for n in range(max(H))):
        raise HilbertError(f"{label}: numerator does not reproduce the sampled differences")

    coeffs = coefficients_from_numerator(numerator, d + 2)
    top = max(H)
    points = list(range(top - d, top + 1))
    fitted = fit_binomial_basis(H, d, points)
    if fitted != coeffs[: d + 1]:
        raise HilbertError(
            f"{label}: derivative route {coeffs[:d + 1]} disagrees with binomial fit {fitted}"
        )
    threshold = top
    while threshold - 1 >= 0 and H[threshold - 1] == hilbert_polynomial_value(coeffs, d, threshold - 1):
        threshold -= 1
    # second Hilbert function cross-check of e_{d+1}
    second = []
    acc = 0
    for n in range(top):
        acc += H[n + 1]
        second.append(acc)
    second_threshold = top - 1
    if second[top - 1] != second_polynomial_value(coeffs, d, top - 1):
        raise HilbertError(f"{label}: e_{d + 1} disagrees with the second Hilbert polynomial")
    while second_threshold - 1 >= 0 and second[second_threshold - 1] == second_polynomial_value(
        coeffs, d, second_threshold - 1
    ):
        second_threshold -= 1
    return HilbertProfile(
        dimension=d,
        samples=sorted(H.items()),
        numerator=numerator,
        coefficients=coeffs,
        fitted=fitted,
        threshold=threshold,
        second_threshold=second_threshold,
    )


# -- ideal-level entry points -----------------------------------------------------
def _require_m_primary(ideal: Ideal):
    flag, wit = ideal.is_m_primary()
    if not flag:
        raise NotMPrimaryError(f"ideal is not m-primary (pure-power witnesses {wit})")


def hilbert_samuel(ideal: Ideal, n: int) -> int:
    """ℓ(A/I^n)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return 0
    if n == 1:
        _require_m_primary(ideal)
    return ideal.power(n).quotient_length()


def hilbert_series_numerator(ideal: Ideal, guard: int = DEFAULT_GUARD, **kw) -> list[int]:
    return profile(ideal, guard=guard, **kw).numerator


def hilbert_coefficients(ideal: Ideal, **kw) -> list[int]:
    return profile(ideal, **kw).coefficients


def second_hilbert_values(ideal: Ideal, n: int) -> int:
    """H2(n) = sum_{j=0}^{n} ℓ(A/I^{j+1})."""
    return sum(hilbert_samuel(ideal, j + 1) for j in range(n + 1))


def profile(ideal: Ideal, **kw) -> HilbertProfile:
    """HilbertProfile of the I-adic filtration."""
    _require_m_primary(ideal)
    d = ideal.ring.dimension
    return hilbert_profile(lambda n: hilbert_samuel(ideal, n), d, **kw)
