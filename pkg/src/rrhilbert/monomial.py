"""Combinatorics of monomial ideals given by exponent tuples.

Used for standard-monomial counting (quotient lengths), enumeration, fast
membership / reducer lookup for m-primary leading-term ideals, and minimal
generators.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Sequence


class NotFiniteError(ValueError):
    """The quotient by this monomial ideal is not finite dimensional."""


def divides(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def minimalize(gens: Iterable[Sequence[int]]) -> list[tuple]:
    """Minimal generators of the monomial ideal, sorted by degree then lex."""
    out: list[tuple] = []
    for g in sorted(set(map(tuple, gens)), key=lambda e: (sum(e), e)):
        if not any(divides(h, g) for h in out):
            out.append(g)
    return out


def pure_powers(gens: Iterable[Sequence[int]], n: int) -> list[int | None]:
    """Smallest k with x_i^k among the generators (None when absent)."""
    best: list[int | None] = [None] * n
    for g in gens:
        nz = [i for i, e in enumerate(g) if e]
        if len(nz) == 1:
            i = nz[0]
            if best[i] is None or g[i] < best[i]:
                best[i] = g[i]
        elif not nz:
            return [0] * n
    return best


def _count(gens: list[tuple], n: int) -> int:
    if any(not any(g) for g in gens):
        return 0
    if n == 1:
        return min(g[0] for g in gens)
    k = min(g[-1] for g in gens if not any(g[:-1]))
    by_last: dict[int, list] = {}
    for g in gens:
        if g[-1] < k:
            by_last.setdefault(g[-1], []).append(g[:-1])
    if n == 2:
        total, run = 0, None
        for c in range(k):
            for g in by_last.get(c, ()):
                run = g[0] if run is None or g[0] < run else run
            total += run
        return total
    total = 0
    level: list[tuple] = []
    for c in range(k):
        level.extend(by_last.get(c, ()))
        total += _count(level, n - 1)
    return total


def count_standard(gens: Iterable[Sequence[int]], n: int) -> int:
    """Number of monomials outside the ideal; raises NotFiniteError."""
    gens = [tuple(g) for g in gens]
    if any(p is None for p in pure_powers(gens, n)):
        raise NotFiniteError("some variable has no pure power among the generators")
    return _count(gens, n)


def _enum(gens: list[tuple], n: int) -> list[tuple]:
    if any(not any(g) for g in gens):
        return []
    if n == 1:
        return [(e,) for e in range(min(g[0] for g in gens))]
    k = min(g[-1] for g in gens if not any(g[:-1]))
    by_last: dict[int, list] = {}
    for g in gens:
        if g[-1] < k:
            by_last.setdefault(g[-1], []).append(g[:-1])
    out = []
    level: list[tuple] = []
    for c in range(k):
        level.extend(by_last.get(c, ()))
        out.extend(e + (c,) for e in _enum(level, n - 1))
    return out


def standard_monomials(gens: Iterable[Sequence[int]], n: int) -> list[tuple]:
    gens = [tuple(g) for g in gens]
    if any(p is None for p in pure_powers(gens, n)):
        raise NotFiniteError("some variable has no pure power among the generators")
    return _enum(gens, n)


class StaircaseIndex:
    """O(1) membership and divisor lookup for an m-primary monomial ideal.

    For every point ``e`` of the box spanned by the pure powers of the first
    n-1 variables it stores the smallest last exponent ``c`` such that
    ``(e, c)`` lies in the ideal, together with a generator witnessing it.
    """

    def __init__(self, gens: Sequence[Sequence[int]], n: int):
        gens = [tuple(g) for g in gens]
        pp = pure_powers(gens, n)
        if any(p is None for p in pp):
            raise NotFiniteError("some variable has no pure power among the generators")
        self.n = n
        self.box = tuple(pp[:-1])
        INF = 1 << 30
        best: dict = {}
        for idx, g in enumerate(gens):
            key = tuple(min(a, b) for a, b in zip(g[:-1], self.box))
            cur = best.get(key)
            if cur is None or g[-1] < cur[0]:
                best[key] = (g[-1], idx)
        table: dict = {}
        for e in product(*(range(b + 1) for b in self.box)):
            cand = best.get(e, (INF, -1))
            for i in range(n - 1):
                if e[i]:
                    prev = table[e[:i] + (e[i] - 1,) + e[i + 1:]]
                    if prev[0] < cand[0]:
                        cand = prev
            table[e] = cand
        self.table = table

    def lookup(self, exps: Sequence[int]):
        """``(in_ideal, generator index or -1)``."""
        key = tuple(min(a, b) for a, b in zip(exps[:-1], self.box))
        c, idx = self.table[key]
        if exps[-1] >= c:
            return True, idx
        return False, -1
