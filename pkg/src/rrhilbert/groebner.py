"""Buchberger's algorithm on packed-monomial polynomials.

Pairs are selected by the normal strategy (smallest lcm first) and pruned with
the Gebauer-Moeller criteria.  Everything here works on raw term dicts
``{packed monomial: coefficient}``; :mod:`rrhilbert.ideal` wraps it.
"""

from __future__ import annotations

import os
from heapq import heapify, heappop, heappush

from .ring import Polynomial, Ring


class GroebnerError(RuntimeError):
    pass


def _verify_default() -> bool:
    return os.environ.get("RRHILBERT_VERIFY_GB", "") not in ("", "0")


class ReducerSet:
    """Monic polynomials used as reducers, stored as (lead, tail) pairs."""

    def __init__(self, ring: Ring, polys=()):
        self.ring = ring
        self.divides = ring.packer.divides
        self.p = ring.field.p
        self.lms: list[int] = []
        self.tails: list[list] = []
        self._cache: dict = {}  # monomial -> reducer index (never invalidated)
        self._miss: set = set()  # irreducible monomials, cleared on add
        for f in polys:
            self.add(f.terms if isinstance(f, Polynomial) else f)

    def add(self, terms: dict) -> int:
        """Append a monic polynomial; returns its index."""
        lm = max(terms)
        self.lms.append(lm)
        self.tails.append([(k, c) for k, c in sorted(terms.items(), reverse=True) if k != lm])
        self._miss.clear()
        return len(self.lms) - 1

    def find(self, m: int):
        r = self._cache.get(m)
        if r is not None:
            return r
        if m in self._miss:
            return None
        divides = self.divides
        for i, lm in enumerate(self.lms):
            if divides(lm, m):
                self._cache[m] = i
                return i
        self._miss.add(m)
        return None

    def reduce(self, terms: dict, full: bool = True) -> dict:
        """Normal form of ``terms`` (not mutated).  With ``full=False`` only the
        leading term is reduced until irreducible."""
        work = dict(terms)
        heap = [-k for k in work]
        heapify(heap)
        rem: dict = {}
        p = self.p
        find, lms, tails = self.find, self.lms, self.tails
        while heap:
            k = -heappop(heap)
            c = work.pop(k, None)
            if not c:
                continue
            i = find(k)
            if i is None:
                rem[k] = c
                if not full:
                    for k2, c2 in work.items():
                        if c2:
                            rem[k2] = c2
                    return rem
                continue
            shift = k - lms[i]
            get = work.get
            if p:
                for tk, tc in tails[i]:
                    mk = tk + shift
                    v = get(mk)
                    if v is None:
                        work[mk] = (-c * tc) % p
                        heappush(heap, -mk)
                    else:
                        work[mk] = (v - c * tc) % p
            else:
                for tk, tc in tails[i]:
                    mk = tk + shift
                    v = get(mk)
                    if v is None:
                        work[mk] = -c * tc
                        heappush(heap, -mk)
                    else:
                        work[mk] = v - c * tc
        return rem

    def reduce_with_quotients(self, terms: dict):
        """Division with remainder; returns ``(quotients, remainder)`` where
        quotients maps reducer index to a term dict."""
        work = dict(terms)
        heap = [-k for k in work]
        heapify(heap)
        rem: dict = {}
        quots: dict = {}
        p = self.p
        off = self.ring.packer.offset
        while heap:
            k = -heappop(heap)
            c = work.pop(k, None)
            if not c:
                continue
            i = self.find(k)
            if i is None:
                rem[k] = c
                continue
            q = quots.setdefault(i, {})
            qk = k - self.lms[i] + off
            q[qk] = (q.get(qk, 0) + c) % p if p else q.get(qk, 0) + c
            shift = k - self.lms[i]
            for tk, tc in self.tails[i]:
                mk = tk + shift
                v = work.get(mk)
                nv = -c * tc if v is None else v - c * tc
                if p:
                    nv %= p
                if v is None:
                    heappush(heap, -mk)
                work[mk] = nv
        return quots, rem


def _monic(terms: dict, field) -> dict:
    lc = terms[max(terms)]
    if lc == field.one:
        return terms
    inv = field.inv(lc)
    p = field.p
    if p:
        return {k: c * inv % p for k, c in terms.items()}
    return {k: c * inv for k, c in terms.items()}


def _spoly(ti: tuple, tj: tuple, lcm: int, p) -> dict:
    """S-polynomial of two monic elements given as (lm, tail)."""
    lmi, taili = ti
    lmj, tailj = tj
    si, sj = lcm - lmi, lcm - lmj
    out = {tk + si: tc for tk, tc in taili}
    get = out.get
    for tk, tc in tailj:
        mk = tk + sj
        v = get(mk)
        out[mk] = -tc if v is None else v - tc
    if p:
        out = {k: v % p for k, v in out.items()}
    return {k: v for k, v in out.items() if v}


def buchberger(ring: Ring, inputs: list[dict], initial: list[dict] = ()) -> list[dict]:
    """Reduced monic Groebner basis of ``initial + inputs``.

    ``initial`` must already be a reduced Groebner basis; S-pairs among its
    elements are skipped.
    """
    pk = ring.packer
    divides = pk.divides
    unpack, pack = pk.unpack, pk.pack
    field = ring.field
    p = field.p
    lex_like = pk.kind not in ("degrevlex", "deglex")

    red = ReducerSet(ring)
    exps: list[tuple] = []
    active: list[int] = []  # indices into red of the current minimal basis
    live: dict = {}  # (i, j) -> lcm
    heap: list = []

    def lcm_of(i: int, j: int) -> int:
        return pack(tuple(map(max, exps[i], exps[j])))

    def sortkey(L: int):
        return (pk.degree(L), L) if lex_like else L

    def add(terms: dict, with_pairs: bool = True):
        h = red.add(terms)
        exps.append(unpack(red.lms[h]))
        lm_h = red.lms[h]
        eh = exps[h]
        if with_pairs:
            groups: dict = {}
            for g in active:
                eg = exps[g]
                L = pack(tuple(map(max, eh, eg)))
                cop = not any(a and b for a, b in zip(eh, eg))
                groups.setdefault(L, []).append((g, cop))
            # criterion B on old pairs
            dead = []
            for (i, j), L in live.items():
                if divides(lm_h, L) and lcm_of(i, h) != L and lcm_of(j, h) != L:
                    dead.append((i, j))
            for key in dead:
                del live[key]
            # criteria M and F on the new pairs
            minimal: list[int] = []
            for L in sorted(groups, key=sortkey):
                if any(divides(M, L) for M in minimal):
                    continue
                minimal.append(L)
                grp = groups[L]
                if any(cop for _, cop in grp):
                    continue
                g = min(i for i, _ in grp)
                live[(g, h)] = L
                heappush(heap, (sortkey(L), g, h))
        active[:] = [g for g in active if not divides(lm_h, red.lms[g])]
        active.append(h)

    for f in initial:
        add(f, with_pairs=False)
    for f in inputs:
        if not f:
            continue
        r = red.reduce(f)
        if r:
            add(_monic(r, field))
    while heap:
        _, i, j = heappop(heap)
        L = live.pop((i, j), None)
        if L is None:
            continue
        s = _spoly((red.lms[i], red.tails[i]), (red.lms[j], red.tails[j]), L, p)
        if not s:
            continue
        r = red.reduce(s)
        if r:
            add(_monic(r, field))

    basis = sorted(active, key=lambda g: red.lms[g])
    return interreduce_basis(ring, [dict([(red.lms[g], field.one)] + red.tails[g]) for g in basis])


def interreduce_basis(ring: Ring, basis: list[dict]) -> list[dict]:
    """Reduce the tails of an already minimal monic basis against each other.

    A tail term is smaller than its own leading monomial, so it can never be
    reduced by that element; one shared reducer set therefore suffices.
    """
    field = ring.field
    red = ReducerSet(ring, basis)
    out = []
    for f in basis:
        lm = max(f)
        tail = red.reduce({k: c for k, c in f.items() if k != lm})
        tail[lm] = field.one
        out.append(tail)
    return out


def is_groebner(ring: Ring, basis: list[dict]) -> bool:
    """Buchberger's criterion: every S-pair reduces to zero.  Coprime pairs
    are skipped (product criterion); all other pairs are checked."""
    pk = ring.packer
    red = ReducerSet(ring, [_monic(b, ring.field) for b in basis])
    n = len(red.lms)
    ex = [pk.unpack(m) for m in red.lms]
    for i in range(n):
        for j in range(i + 1, n):
            if not any(a and b for a, b in zip(ex[i], ex[j])):
                continue
            L = pk.pack(tuple(map(max, ex[i], ex[j])))
            s = _spoly((red.lms[i], red.tails[i]), (red.lms[j], red.tails[j]), L, ring.field.p)
            if s and red.reduce(s):
                return False
    return True


def groebner_basis_polys(
    polys: list[Polynomial], initial: list[Polynomial] = (), verify: bool | None = None
) -> list[Polynomial]:
    """Reduced monic Groebner basis of the ideal generated by ``polys``
    (plus ``initial``, which must itself be a reduced basis)."""
    everything = list(initial) + list(polys)
    if not everything:
        return []
    ring = everything[0].ring
    for f in everything:
        if f.ring is not ring and f.ring != ring:
            raise GroebnerError("generators belong to different rings")
    out = buchberger(ring, [f.terms for f in polys if f], [f.terms for f in initial])
    if verify is None:
        verify = _verify_default()
    if verify and not is_groebner(ring, out):
        raise GroebnerError("Buchberger post-check failed: an S-pair does not reduce to zero")
    out.sort(key=max)
    return [Polynomial(ring, t) for t in out]
