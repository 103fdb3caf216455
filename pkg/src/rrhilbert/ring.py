"""Sparse multivariate polynomials over an exact field.

Monomials are exposed as exponent tuples but stored packed into a single
Python int whose integer order *is* the monomial order.  Each exponent gets a
16-bit field (15 value bits and a guard bit), so multiplication is integer
addition minus a constant and divisibility is one masked subtraction.
"""

from __future__ import annotations

import re
from itertools import combinations
from typing import Iterable, Sequence

from .field import QQ, CoefficientField

Monomial = tuple  # tuple[int, ...]

_W = 16
_GUARD = 1 << (_W - 1)
_VMASK = _GUARD - 1
MAX_EXPONENT = _VMASK

ORDER_KINDS = ("degrevlex", "deglex", "lex", "elim")

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class RingError(ValueError):
    pass


class MonomialOrder:
    """A global monomial order.

    ``elim`` is the block order used internally for elimination: the first
    variable dominates lexicographically, ties are broken by degrevlex on the
    remaining variables.
    """

    __slots__ = ("kind",)

    def __init__(self, kind: str = "degrevlex"):
        if kind not in ORDER_KINDS:
            raise RingError(f"unknown monomial order {kind!r}")
        self.kind = kind

    def key(self, a: Sequence[int]) -> tuple:
        """Sort key: ``key(a) < key(b)`` iff ``a < b`` in this order."""
        if self.kind == "lex":
            return tuple(a)
        if self.kind == "deglex":
            return (sum(a), tuple(a))
        if self.kind == "degrevlex":
            return (sum(a), tuple(-e for e in reversed(a)))
        rest = a[1:]
        return (a[0], sum(rest), tuple(-e for e in reversed(rest)))

    def compare(self, a: Sequence[int], b: Sequence[int]) -> int:
        if len(a) != len(b):
            raise RingError("monomials have different numbers of variables")
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and other.kind == self.kind

    def __hash__(self):
        return hash(self.kind)

    def __repr__(self):
        return f"MonomialOrder({self.kind!r})"


def monomial_compare(order: MonomialOrder | str, a: Sequence[int], b: Sequence[int]) -> str:
    """Return ``"less"``, ``"equal"`` or ``"greater"``."""
    if isinstance(order, str):
        order = MonomialOrder(order)
    return ("less", "equal", "greater")[order.compare(a, b) + 1]


class Packer:
    """Encodes exponent tuples as order-preserving ints for one ring."""

    def __init__(self, nvars: int, kind: str):
        self.n = n = nvars
        fields = []  # (position, inverted)
        deg_pos = None
        deg_skip = 0
        if kind == "lex":
            fields = [(_W * (n - 1 - i), False) for i in range(n)]
        elif kind == "deglex":
            fields = [(_W * (n - 1 - i), False) for i in range(n)]
            deg_pos = _W * n
        elif kind == "degrevlex":
            fields = [(_W * i, True) for i in range(n)]
            deg_pos = _W * n
        else:  # elim
            fields = [(_W * n, False)] + [(_W * (i - 1), True) for i in range(1, n)]
            deg_pos = _W * (n - 1)
            deg_skip = 1
        self.kind = kind
        self.fields = fields
        self.deg_pos = deg_pos
        self.deg_skip = deg_skip
        self.offset = sum(_VMASK << p for p, inv in fields if inv)
        self.dmask = sum(_VMASK << p for p, inv in fields if not inv)
        self.dguard = sum(_GUARD << p for p, inv in fields if not inv)
        self.imask = sum(_VMASK << p for p, inv in fields if inv)
        self.iguard = sum(_GUARD << p for p, inv in fields if inv)
        self.one = self.pack((0,) * n)
        self.divides = self._make_divides()

    def pack(self, exps: Sequence[int]) -> int:
        key = 0
        for e, (pos, inv) in zip(exps, self.fields):
            if e < 0 or e > MAX_EXPONENT:
                raise RingError(f"exponent {e} out of range")
            key |= (_VMASK - e if inv else e) << pos
        if self.deg_pos is not None:
            key |= sum(exps[self.deg_skip:]) << self.deg_pos
        return key

    def unpack(self, key: int) -> Monomial:
        out = []
        for pos, inv in self.fields:
            v = (key >> pos) & _VMASK
            out.append(_VMASK - v if inv else v)
        return tuple(out)

    def degree(self, key: int) -> int:
        if self.kind in ("degrevlex", "deglex"):
            return key >> self.deg_pos
        return sum(self.unpack(key))

    def mul(self, a: int, b: int) -> int:
        return a + b - self.offset

    def div(self, a: int, b: int) -> int:
        return a - b + self.offset

    def lcm(self, a: int, b: int) -> int:
        return self.pack([max(x, y) for x, y in zip(self.unpack(a), self.unpack(b))])

    def coprime(self, a: int, b: int) -> bool:
        return all(x == 0 or y == 0 for x, y in zip(self.unpack(a), self.unpack(b)))

    def _make_divides(self):
        dm, dg, im, ig = self.dmask, self.dguard, self.imask, self.iguard
        if not dm:
            def divides(d, m):
                return (((d & im) | ig) - (m & im)) & ig == ig
        elif not im:
            def divides(d, m):
                return (((m & dm) | dg) - (d & dm)) & dg == dg
        else:
            def divides(d, m):
                return ((((m & dm) | dg) - (d & dm)) & dg == dg
                        and (((d & im) | ig) - (m & im)) & ig == ig)
        return divides


class Ring:
    """``field[variables]`` with a monomial order, optionally modulo fixed
    ambient relations (the local ring is then ``field[vars]/relations``
    localized at the origin)."""

    def __init__(
        self,
        variables: Iterable[str],
        field: CoefficientField = QQ,
        order: str | MonomialOrder = "degrevlex",
        relations: Iterable = (),
        dimension: int | None = None,
    ):
        variables = tuple(variables)
        if not variables:
            raise RingError("a ring needs at least one variable")
        for v in variables:
            if not _IDENT.match(v):
                raise RingError(f"invalid variable name {v!r}")
        if len(set(variables)) != len(variables):
            raise RingError("variable names must be distinct")
        self.variables = variables
        self.nvars = len(variables)
        self.field = field
        self.order = order if isinstance(order, MonomialOrder) else MonomialOrder(order)
        self.packer = Packer(self.nvars, self.order.kind)
        self._index = {v: i for i, v in enumerate(variables)}
        rels = []
        for r in relations:
            if isinstance(r, str):
                from .parse import parse_polynomial

                r = parse_polynomial(r, self)
            elif r.ring is not self:
                r = r.change_ring(self)
            if r:
                rels.append(r)
        self.relations = tuple(rels)
        self._ambient_basis = None
        self._ambient_reducer = None
        self._declared_dimension = dimension
        self._dimension = None

    # -- identity -----------------------------------------------------------
    def _sig(self):
        return (self.variables, self.field, self.order, tuple(str(r) for r in self.relations))

    def __eq__(self, other):
        return self is other or (isinstance(other, Ring) and self._sig() == other._sig())

    def __hash__(self):
        return hash(self._sig())

    def __repr__(self):
        rel = f" / ({', '.join(map(str, self.relations))})" if self.relations else ""
        return f"{self.field}[{','.join(self.variables)}]{rel} ({self.order.kind})"

    # -- construction helpers ----------------------------------------------
    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise RingError(f"unknown variable {name!r}") from None

    def gen(self, name: str) -> "Polynomial":
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return Polynomial(self, {self.packer.pack(e): self.field.one})

    def gens(self) -> list["Polynomial"]:
        return [self.gen(v) for v in self.variables]

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        c = self.field(c)
        return Polynomial(self, {self.packer.one: c} if c else {})

    def monomial(self, exps: Sequence[int], coeff=1) -> "Polynomial":
        if len(exps) != self.nvars:
            raise RingError("exponent vector has the wrong length")
        c = self.field(coeff)
        return Polynomial(self, {self.packer.pack(exps): c} if c else {})

    def from_dict(self, terms: dict) -> "Polynomial":
        """Build from ``{exponent tuple: coefficient}``."""
        pk, F = self.packer, self.field
        out: dict = {}
        for e, c in terms.items():
            if len(e) != self.nvars:
                raise RingError("exponent vector has the wrong length")
            k = pk.pack(e)
            v = out.get(k, F.zero) + F(c)
            if F.p:
                v %= F.p
            out[k] = v
        return Polynomial(self, {k: v for k, v in out.items() if v})

    def with_relations(self, extra: Iterable["Polynomial"], dimension: int | None = None) -> "Ring":
        """Same variables, field and order with additional ambient relations."""
        extra = [p.change_ring(self) if p.ring is not self else p for p in extra]
        ring = Ring(self.variables, self.field, self.order, (), dimension)
        ring.relations = tuple(r.change_ring(ring) for r in list(self.relations) + extra if r)
        return ring

    def plain(self) -> "Ring":
        """The ambient polynomial ring without relations."""
        if not self.relations:
            return self
        return Ring(self.variables, self.field, self.order)

    # -- ambient quotient data ---------------------------------------------
    @property
    def ambient_basis(self) -> tuple["Polynomial", ...]:
        """Reduced Groebner basis of the relation ideal (empty when plain)."""
        if self._ambient_basis is None:
            if self.relations:
                from .groebner import groebner_basis_polys

                self._ambient_basis = tuple(groebner_basis_polys(list(self.relations)))
            else:
                self._ambient_basis = ()
        return self._ambient_basis

    @property
    def ambient_reducer(self):
        """ReducerSet over the ambient basis (shared by every ideal of the ring)."""
        if self._ambient_reducer is None:
            from .groebner import ReducerSet

            self._ambient_reducer = ReducerSet(self, self.ambient_basis)
        return self._ambient_reducer

    @property
    def dimension(self) -> int:
        """Krull dimension d of the modelled local ring.

        Computed from the leading-term ideal of the relations.  That is the
        global dimension, which bounds the local one and equals it when the
        relations are homogeneous; a declared value is checked accordingly.
        """
        if self._dimension is None:
            d = self._computed_dimension()
            decl = self._declared_dimension
            if decl is not None:
                homogeneous = all(r.is_homogeneous() for r in self.relations)
                if decl > d or (homogeneous and decl != d) or decl < 0:
                    raise RingError(f"declared dimension {decl} but relations give {d}")
                d = decl
            self._dimension = d
        return self._dimension

    def _computed_dimension(self) -> int:
        basis = self.ambient_basis
        if not basis:
            return self.nvars
        if any(g.is_constant() for g in basis):
            raise RingError("ambient relations generate the unit ideal")
        supports = [
            frozenset(i for i, e in enumerate(g.leading_exponents()) if e) for g in basis
        ]
        for size in range(self.nvars, -1, -1):
            for subset in combinations(range(self.nvars), size):
                s = frozenset(subset)
                if not any(sup <= s for sup in supports):
                    return size
        return 0


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps packed monomials to nonzero
    coefficients."""

    __slots__ = ("ring", "terms", "_lead")

    def __init__(self, ring: Ring, terms: dict):
        self.ring = ring
        self.terms = terms
        self._lead = None

    # -- inspection ---------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.ring.packer.one in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def lead_key(self) -> int:
        if self._lead is None:
            if not self.terms:
                raise ValueError("zero polynomial has no leading term")
            self._lead = max(self.terms)
        return self._lead

    def leading_exponents(self) -> Monomial:
        return self.ring.packer.unpack(self.lead_key())

    def leading_coefficient(self):
        return self.terms[self.lead_key()]

    def items(self) -> list[tuple[Monomial, object]]:
        """``(exponents, coefficient)`` pairs in decreasing monomial order."""
        up = self.ring.packer.unpack
        return [(up(k), self.terms[k]) for k in sorted(self.terms, reverse=True)]

    def as_dict(self) -> dict:
        up = self.ring.packer.unpack
        return {up(k): c for k, c in self.terms.items()}

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        deg = self.ring.packer.degree
        return max(deg(k) for k in self.terms)

    def min_degree(self) -> int:
        deg = self.ring.packer.degree
        return min(deg(k) for k in self.terms)

    def is_homogeneous(self) -> bool:
        if not self.terms:
            return True
        deg = self.ring.packer.degree
        return len({deg(k) for k in self.terms}) == 1

    # -- arithmetic ----------------------------------------------------------
    def _check(self, other: "Polynomial"):
        if not isinstance(other, Polynomial):
            raise TypeError(f"expected Polynomial, got {type(other).__name__}")
        if other.ring is not self.ring and other.ring != self.ring:
            raise RingError("polynomials belong to different rings")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, int):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.field.p
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k)
            if v is None:
                out[k] = c
            else:
                v = v + c
                if p:
                    v %= p
                if v:
                    out[k] = v
                else:
                    del out[k]
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.field.p
        if p:
            return Polynomial(self.ring, {k: (-c) % p for k, c in self.terms.items()})
        return Polynomial(self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.field.p
        off = self.ring.packer.offset
        out: dict = {}
        get = out.get
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = k1 + k2 - off
                v = get(k)
                out[k] = c1 * c2 if v is None else v + c1 * c2
        if p:
            out = {k: v % p for k, v in out.items()}
        return Polynomial(self.ring, {k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c) -> "Polynomial":
        F = self.ring.field
        c = F(c) if not isinstance(c, type(F.one)) else c
        if not c:
            return self.ring.zero()
        p = F.p
        if p:
            return Polynomial(self.ring, {k: v * c % p for k, v in self.terms.items()})
        return Polynomial(self.ring, {k: v * c for k, v in self.terms.items()})

    def mul_monomial(self, key: int, c=None) -> "Polynomial":
        off = self.ring.packer.offset
        if c is None:
            return Polynomial(self.ring, {k + key - off: v for k, v in self.terms.items()})
        p = self.ring.field.p
        if p:
            return Polynomial(self.ring, {k + key - off: v * c % p for k, v in self.terms.items()})
        return Polynomial(self.ring, {k + key - off: v * c for k, v in self.terms.items()})

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.leading_coefficient()))

    def change_ring(self, ring: Ring) -> "Polynomial":
        """Reinterpret in a ring with the same variables (possibly a different
        order or relation set)."""
        if ring.variables != self.ring.variables or ring.field != self.ring.field:
            raise RingError("change_ring needs identical variables and field")
        if ring.order == self.ring.order:
            return Polynomial(ring, self.terms)
        up, pk = self.ring.packer.unpack, ring.packer.pack
        return Polynomial(ring, {pk(up(k)): c for k, c in self.terms.items()})

    # -- comparison / printing ---------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (other.ring is self.ring or other.ring == self.ring) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self):
        from .parse import format_polynomial

        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({str(self)!r})"
