"""Ideals with cached reduced Groebner bases and the usual ideal arithmetic.

In a ring with ambient relations every ideal is stored as its preimage: the
relations are implicit generators and all computations include them.

Colons against an ideal with finite-dimensional quotient are done by linear
algebra on its standard monomials; everything else goes through elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .groebner import ReducerSet, buchberger, groebner_basis_polys
from .linalg import SparseEchelon, kernel
from .monomial import NotFiniteError, StaircaseIndex, count_standard, pure_powers
from .monomial import standard_monomials as _enumerate_standard
from .parse import parse_polynomial
from .ring import Polynomial, Ring

__all__ = [
    "Ideal",
    "IdealError",
    "NotFiniteError",
    "StandardMonomialSet",
    "groebner_basis",
    "normal_form",
    "ideal_sum",
    "ideal_product",
    "ideal_power",
    "ideal_colon",
    "ideal_intersection",
    "ideal_equals",
    "quotient_length",
    "is_m_primary",
    "divide_exact",
]

# above this many reducers the staircase lookup beats a linear scan
_INDEX_THRESHOLD = 40


class IdealError(ValueError):
    pass


@dataclass(frozen=True)
class StandardMonomialSet:
    monomials: tuple  # exponent tuples
    count: int


class _IndexedReducer(ReducerSet):
    """ReducerSet whose divisor search uses a StaircaseIndex."""

    def __init__(self, ring: Ring, polys, index: StaircaseIndex):
        super().__init__(ring, polys)
        self._index = index
        self._unpack = ring.packer.unpack

    def find(self, m: int):
        r = self._cache.get(m)
        if r is not None or m in self._miss:
            return r
        inside, idx = self._index.lookup(self._unpack(m))
        if inside:
            self._cache[m] = idx
            return idx
        self._miss.add(m)
        return None


def _shift(terms: dict, key: int, off: int) -> dict:
    d = key - off
    return {k + d: c for k, c in terms.items()}


class Ideal:
    """An ideal of ``ring`` given by generators (strings are parsed).

    Instances are immutable; the Groebner basis, standard monomials and
    powers are computed lazily and cached.
    """

    def __init__(self, ring: Ring, generators: Iterable = (), *, _basis=None, _std=None):
        self.ring = ring
        gens = []
        seen = set()
        amb = ring.ambient_reducer if ring.relations else None
        for g in generators:
            g = _coerce(ring, g)
            if amb is not None and _basis is None:
                g = Polynomial(ring, amb.reduce(g.terms))
            if not g:
                continue
            key = frozenset(g.monic().terms.items())
            if key in seen:
                continue
            seen.add(key)
            gens.append(g)
        self._gens = tuple(gens)
        self._basis = tuple(_basis) if _basis is not None else None
        self._reducer = None
        self._std = _std  # packed standard monomials, when known
        self._lead = None
        self._finite = None
        self._powers: dict[int, Ideal] = {1: self}
        self._power_source = None  # n -> I^n built elsewhere (images in quotients)
        self._memo: dict = {}  # caches owned by downstream modules

    # -- basic data ---------------------------------------------------------
    @property
    def generators(self) -> tuple[Polynomial, ...]:
        """All generators of the preimage, ambient relations first."""
        return tuple(self.ring.relations) + self._gens

    @property
    def own_generators(self) -> tuple[Polynomial, ...]:
        """Generators beyond the ambient relations."""
        return self._gens

    def __repr__(self):
        return f"Ideal({', '.join(map(str, self._gens)) or '0'})"

    def groebner_basis(self) -> tuple[Polynomial, ...]:
        if self._basis is None:
            ring = self.ring
            amb = list(ring.ambient_basis)
            if self._gens:
                basis = tuple(groebner_basis_polys(list(self._gens), initial=amb))
            else:
                basis = tuple(amb)
            self._basis = basis
        return self._basis

    def leading_exponents(self) -> list[tuple]:
        if self._lead is None:
            self._lead = [g.leading_exponents() for g in self.groebner_basis()]
        return self._lead

    @property
    def reducer(self) -> ReducerSet:
        if self._reducer is None:
            basis = self.groebner_basis()
            red = None
            if len(basis) > _INDEX_THRESHOLD and self.is_finite():
                try:
                    idx = StaircaseIndex(self.leading_exponents(), self.ring.nvars)
                    red = _IndexedReducer(self.ring, basis, idx)
                except MemoryError:  # pragma: no cover - huge boxes only
                    red = None
            self._reducer = red or ReducerSet(self.ring, basis)
        return self._reducer

    def _check(self, other):
        if other.ring is not self.ring and other.ring != self.ring:
            raise IdealError("ring mismatch")

    # -- membership ---------------------------------------------------------
    def normal_form(self, p) -> Polynomial:
        p = _coerce(self.ring, p)
        return Polynomial(self.ring, self.reducer.reduce(p.terms))

    def contains(self, p) -> bool:
        p = _coerce(self.ring, p)
        if not p:
            return True
        return not self.reducer.reduce(p.terms, full=False)

    __contains__ = contains

    def is_unit(self) -> bool:
        b = self.groebner_basis()
        return len(b) == 1 and b[0].is_constant()

    def is_zero(self) -> bool:
        """True when the ideal is zero in the (quotient) ring."""
        if not self._gens:
            return True
        amb = self.ring.ambient_basis
        return bool(amb) and len(self.groebner_basis()) == len(amb) and all(
            x.terms == y.terms for x, y in zip(self.groebner_basis(), amb)
        )

    def issubset(self, other: "Ideal") -> bool:
        self._check(other)
        return all(other.contains(g) for g in self._gens)

    def equals(self, other: "Ideal") -> bool:
        self._check(other)
        a, b = self.groebner_basis(), other.groebner_basis()
        return len(a) == len(b) and all(x.terms == y.terms for x, y in zip(a, b))

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.equals(other)

    def __hash__(self):
        return hash(tuple(frozenset(g.terms.items()) for g in self.groebner_basis()))

    # -- finite quotients ---------------------------------------------------
    def is_finite(self) -> bool:
        """Every variable has a pure power among the leading terms."""
        if self._finite is None:
            pp = pure_powers(self.leading_exponents(), self.ring.nvars)
            self._finite = all(p is not None for p in pp)
        return self._finite

    def quotient_length(self) -> int:
        if self._std is not None:
            return len(self._std)
        return count_standard(self.leading_exponents(), self.ring.nvars)

    def standard_monomials(self) -> StandardMonomialSet:
        mons = tuple(self.ring.packer.unpack(k) for k in self._standard_keys())
        return StandardMonomialSet(mons, len(mons))

    def _standard_keys(self) -> list[int]:
        if self._std is None:
            pack = self.ring.packer.pack
            mons = _enumerate_standard(self.leading_exponents(), self.ring.nvars)
            self._std = sorted(pack(e) for e in mons)
        return self._std

    def is_m_primary(self):
        """``(flag, witnesses)``: witnesses[i] is the least k with x_i^k in
        the ideal (None when no such k was found)."""
        ring = self.ring
        n = ring.nvars
        if not self.is_finite():
            return False, (None,) * n
        bound = self.quotient_length()
        wit = []
        red = self.reducer
        for i in range(n):
            x = ring.gen(ring.variables[i]).terms
            cur = dict(x)
            found = None
            for k in range(1, bound + 2):
                cur = red.reduce(cur)
                if not cur:
                    found = k
                    break
                cur = _shift(cur, next(iter(x)), ring.packer.offset)
            wit.append(found)
        return all(w is not None for w in wit), tuple(wit)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other: "Ideal") -> "Ideal":
        self._check(other)
        if self._basis is not None:
            return self.plus(other._gens)
        if other._basis is not None:
            return other.plus(self._gens)
        return Ideal(self.ring, self._gens + other._gens)

    def plus(self, polys: Iterable) -> "Ideal":
        """self + (polys), continuing Buchberger from this ideal's basis."""
        polys = [_coerce(self.ring, p) for p in polys]
        red = self.reducer
        extra = [Polynomial(self.ring, r) for r in (red.reduce(p.terms) for p in polys) if r]
        if not extra:
            return self
        basis = buchberger(self.ring, [f.terms for f in extra], [g.terms for g in self.groebner_basis()])
        basis.sort(key=max)
        return Ideal(self.ring, self._gens + tuple(extra),
                     _basis=[Polynomial(self.ring, t) for t in basis])

    def in_quotient(self, sub: Ring) -> "Ideal":
        """The image of this ideal in ``sub``, a ring with the same variables
        and order whose relations extend this ring's relations."""
        ring = self.ring
        if sub is ring:
            return self
        k = len(ring.relations)
        if (sub.variables != ring.variables or sub.order != ring.order or sub.field != ring.field
                or [str(r) for r in sub.relations[:k]] != [str(r) for r in ring.relations]):
            raise IdealError("target ring does not extend this ring")
        extra = [r.terms for r in sub.relations[k:]]
        basis = buchberger(sub, extra, [g.terms for g in self.groebner_basis()])
        basis.sort(key=max)
        gens = [g.change_ring(sub) for g in self._gens]
        out = Ideal(sub, (), _basis=[Polynomial(sub, t) for t in basis])
        amb = sub.ambient_reducer
        out._gens = tuple(g for g in gens if amb.reduce(g.terms, full=False))
        parent = self
        out._power_source = lambda n: parent.power(n).in_quotient(sub)
        return out

    def __mul__(self, other: "Ideal") -> "Ideal":
        self._check(other)
        return Ideal(self.ring, _pruned_products(self.ring, self._gens, other._gens))

    def __pow__(self, n: int) -> "Ideal":
        return self.power(n)

    def power(self, n: int) -> "Ideal":
        if n < 0:
            raise IdealError("negative power")
        if n == 0:
            return Ideal(self.ring, [self.ring.one()])
        cache = self._powers
        if n in cache:
            return cache[n]
        if self._power_source is not None:
            return cache.setdefault(n, self._power_source(n))
        k = max(m for m in cache if m <= n)
        cur = cache[k]
        while k < n:
            k += 1
            cur = Ideal(self.ring, _pruned_products(self.ring, cur._gens, self._gens))
            cache.setdefault(k, cur)
            cur = cache[k]
        return cur

    def colon(self, other) -> "Ideal":
        """``{f : f * other in self}``; ``other`` may be an Ideal or a polynomial."""
        if not isinstance(other, Ideal):
            other = Ideal(self.ring, [_coerce(self.ring, other)])
        self._check(other)
        gens = [g for g in other._gens if not self.contains(g)]
        if not gens:
            return Ideal(self.ring, [self.ring.one()])
        if self.is_finite():
            return _colon_finite(self, gens)
        return _colon_elimination(self, gens)

    def colon_by_elimination(self, other) -> "Ideal":
        """Colon through intersections; an independent route used for checks."""
        if not isinstance(other, Ideal):
            other = Ideal(self.ring, [_coerce(self.ring, other)])
        self._check(other)
        gens = [g for g in other._gens if not self.contains(g)]
        if not gens:
            return Ideal(self.ring, [self.ring.one()])
        return _colon_elimination(self, gens)

    def intersection(self, other: "Ideal") -> "Ideal":
        self._check(other)
        return Ideal(self.ring, _intersect(self.ring, self.groebner_basis(), other.groebner_basis()))


def _coerce(ring: Ring, g) -> Polynomial:
    if isinstance(g, str):
        return parse_polynomial(g, ring)
    if isinstance(g, Polynomial):
        if g.ring is not ring:
            if g.ring != ring:
                raise IdealError("generator belongs to a different ring")
            return g.change_ring(ring)
        return g
    return ring.constant(g)


def _pruned_products(ring: Ring, left: Sequence[Polynomial], right: Sequence[Polynomial]):
    """Pairwise products, reduced modulo the ambient relations, keeping only
    those outside the linear span of the ones already kept."""
    amb = ring.ambient_reducer if ring.relations else None
    ech = SparseEchelon(ring.field)
    out = []
    seen = set()
    for a in left:
        for b in right:
            prod = a * b
            terms = amb.reduce(prod.terms) if amb is not None else prod.terms
            if not terms:
                continue
            fp = frozenset(terms)
            if len(terms) == 1 and fp in seen:
                continue
            seen.add(fp)
            if ech.add(terms) is None:
                out.append(Polynomial(ring, terms))
    return out


def _colon_finite(a: Ideal, gens: list[Polynomial]) -> Ideal:
    """(a : (gens)) when a has finite colength.

    The kernel of f -> (NF(f*g_j))_j on the span of the standard monomials is
    (a : b)/a; its reduced echelon form plus the basis of a yields the reduced
    basis of the colon directly.
    """
    ring = a.ring
    pk = ring.packer
    off = pk.offset
    field = ring.field
    red = a.reducer
    std = a._standard_keys()
    nb = len(gens)
    labelled = []
    for s in std:
        vec = {}
        for j, g in enumerate(gens):
            nf = red.reduce(_shift(g.terms, s, off))
            for k, c in nf.items():
                vec[k * nb + j] = c
        labelled.append((s, vec))
    combos = kernel(labelled, field)
    ech = SparseEchelon(field)
    for c in combos:
        ech.add(c)
    rows = ech.reduced_rows()
    if not rows:
        return a
    if pk.one in rows:
        return Ideal(ring, [ring.one()])
    std_c = [s for s in std if s not in rows]
    std_set = set(std_c)
    unit_keys = [pk.pack(tuple(1 if i == j else 0 for i in range(ring.nvars))) for j in range(ring.nvars)]

    def minimal(m: int) -> bool:
        e = pk.unpack(m)
        for i, v in enumerate(e):
            if v and (m - unit_keys[i] + off) not in std_set:
                return False
        return True

    basis = []
    for piv in sorted(rows):
        if minimal(piv):
            basis.append(Polynomial(ring, rows[piv]))
    for g in a.groebner_basis():
        lm = g.lead_key()
        if not minimal(lm):
            continue
        terms = dict(g.terms)
        for k in sorted((k for k in g.terms if k in rows), reverse=True):
            c = terms.pop(k, None)
            if not c:
                continue
            for col, v in rows[k].items():
                if col == k:
                    continue
                nv = terms.get(col, field.zero) - c * v
                if field.p:
                    nv %= field.p
                if nv:
                    terms[col] = nv
                else:
                    terms.pop(col, None)
        basis.append(Polynomial(ring, terms))
    basis.sort(key=lambda f: f.lead_key())
    amb_keys = {frozenset(f.terms.items()) for f in ring.ambient_basis}
    own = [f for f in basis if frozenset(f.terms.items()) not in amb_keys]
    out = Ideal(ring, (), _basis=basis, _std=std_c)
    out._gens = tuple(own)
    return out


def _aux_name(ring: Ring) -> str:
    name = "elimvar"
    while name in ring.variables:
        name += "_"
    return name


def _intersect(ring: Ring, a: Sequence[Polynomial], b: Sequence[Polynomial]) -> list[Polynomial]:
    """Generators of (a) ∩ (b) in the ambient polynomial ring, via
    t*a + (1-t)*b eliminated with the first variable dominant."""
    aux = Ring((_aux_name(ring),) + ring.variables, ring.field, "elim")
    pk, apk = ring.packer, aux.packer
    p = ring.field.p

    def lift(f: Polynomial, t: int) -> dict:
        return {apk.pack((t,) + pk.unpack(k)): c for k, c in f.terms.items()}

    inputs = []
    for f in a:
        if f:
            inputs.append(lift(f, 1))
    for f in b:
        if f:
            t0, t1 = lift(f, 0), lift(f, 1)
            d = dict(t0)
            for k, c in t1.items():
                d[k] = (-c) % p if p else -c
            inputs.append(d)
    basis = buchberger(aux, inputs)
    out = []
    for terms in basis:
        lm = max(terms)
        if apk.unpack(lm)[0] == 0:
            out.append(Polynomial(ring, {pk.pack(apk.unpack(k)[1:]): c for k, c in terms.items()}))
    return out


def divide_exact(h: Polynomial, g: Polynomial) -> Polynomial:
    """h / g, raising IdealError when g does not divide h."""
    if not g:
        raise IdealError("division by zero")
    ring = h.ring
    red = ReducerSet(ring, [g.monic()])
    quots, rem = red.reduce_with_quotients(h.terms)
    if rem:
        raise IdealError("inexact division")
    q = Polynomial(ring, quots.get(0, {}))
    return q.scale(ring.field.inv(g.leading_coefficient()))


def _colon_elimination(a: Ideal, gens: list[Polynomial]) -> Ideal:
    ring = a.ring
    plain = ring.plain()
    basis_a = [f.change_ring(plain) for f in a.groebner_basis()]
    result = None
    for g in gens:
        gp = g.change_ring(plain)
        inter = _intersect(plain, basis_a, [gp])
        quot = [divide_exact(h, gp).change_ring(ring) for h in inter]
        part = Ideal(ring, quot)
        result = part if result is None else result.intersection(part)
    return result


# -- functional interface ------------------------------------------------------
def groebner_basis(ideal: Ideal) -> list[Polynomial]:
    return list(ideal.groebner_basis())


def normal_form(p: Polynomial, ideal: Ideal) -> Polynomial:
    if p.ring is not ideal.ring and p.ring != ideal.ring:
        raise IdealError("ring mismatch")
    return ideal.normal_form(p)


def ideal_sum(a: Ideal, b: Ideal) -> Ideal:
    return a + b


def ideal_product(a: Ideal, b: Ideal) -> Ideal:
    return a * b


def ideal_power(a: Ideal, n: int) -> Ideal:
    return a.power(n)


def ideal_colon(a: Ideal, b) -> Ideal:
    return a.colon(b)


def ideal_intersection(a: Ideal, b: Ideal) -> Ideal:
    return a.intersection(b)


def ideal_equals(a: Ideal, b: Ideal) -> bool:
    return a.equals(b)


def quotient_length(ideal: Ideal, with_monomials: bool = False):
    """ℓ of the quotient; optionally with the standard monomials."""
    if with_monomials:
        s = ideal.standard_monomials()
        return s.count, s
    return ideal.quotient_length()


def is_m_primary(ideal: Ideal):
    return ideal.is_m_primary()
