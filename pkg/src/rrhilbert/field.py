"""Exact coefficient fields: the rationals and prime fields Z/p."""

from __future__ import annotations

from fractions import Fraction

import gmpy2

DEFAULT_PRIME = 32003


class FieldError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    return n >= 2 and bool(gmpy2.is_prime(n, 50))


class CoefficientField:
    """Either Q (``p is None``) or Z/p.

    Rational elements are ``gmpy2.mpq``; prime-field elements are Python ints
    in ``range(p)``.  Hot loops elsewhere read ``field.p`` directly and reduce
    inline, so keep this class thin.
    """

    __slots__ = ("p", "zero", "one")

    def __init__(self, p: int | None = None):
        if p is not None:
            if not _is_prime(p) or p >= 2**63:
                raise FieldError(f"characteristic {p} is not a machine-word prime")
            self.zero, self.one = 0, 1
        else:
            self.zero, self.one = gmpy2.mpq(0), gmpy2.mpq(1)
        self.p = p

    @property
    def is_rational(self) -> bool:
        return self.p is None

    def __eq__(self, other):
        return isinstance(other, CoefficientField) and other.p == self.p

    def __hash__(self):
        return hash(("field", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    def __str__(self):
        return "Q" if self.p is None else f"p:{self.p}"

    def __call__(self, value) -> object:
        """Coerce an int, Fraction, mpq or ``"a/b"`` string into the field."""
        if isinstance(value, str):
            value = Fraction(value)
        if self.p is None:
            return gmpy2.mpq(value)
        if isinstance(value, int):
            return value % self.p
        q = Fraction(value)
        if q.denominator % self.p == 0:
            raise FieldError(f"denominator {q.denominator} is not invertible mod {self.p}")
        return q.numerator * pow(q.denominator, -1, self.p) % self.p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / a
        return pow(a, -1, self.p)

    def neg(self, a):
        return (-a) % self.p if self.p else -a

    def add(self, a, b):
        return (a + b) % self.p if self.p else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.p else a * b

    def to_fraction(self, a) -> Fraction:
        if self.p is None:
            return Fraction(int(a.numerator), int(a.denominator))
        return Fraction(int(a))

    def fmt(self, a) -> str:
        """Canonical text of a coefficient (prime-field elements are printed
        in the symmetric range so that ``-1`` round-trips)."""
        if self.p is None:
            return str(a)
        a = int(a)
        return str(a - self.p if a > self.p // 2 else a)


QQ = CoefficientField()


def parse_field(text: str) -> CoefficientField:
    """``"Q"``/``"QQ"`` or ``"p:N"`` (``"p"`` alone uses the default prime)."""
    t = text.strip()
    if t in ("Q", "QQ"):
        return QQ
    if t == "p":
        return CoefficientField(DEFAULT_PRIME)
    if t.startswith("p:"):
        try:
            return CoefficientField(int(t[2:]))
        except ValueError as exc:
            raise FieldError(str(exc)) from None
    raise FieldError(f"unknown field {text!r}; expected Q or p:N")
