"""Line-oriented ideal specification files.

    # comment
    ring x,y,z over Q order degrevlex
    mod <poly>; <poly>          (optional, repeatable: ambient relations)
    dim <N>                     (optional: declared Krull dimension)
    ideal <poly>; <poly>; ...   (repeatable)
    reduction <poly>; ...       (optional: a user-pinned reduction J)
    assert integrally_closed
    set power_budget=12         (also k_budget, window, confirm_steps, retries)
    seed 42
"""

from __future__ import annotations

import dataclasses
import re
from dataclasses import dataclass

from ..field import FieldError, parse_field
from ..filtration import DEFAULT_CONFIRM_STEPS, DEFAULT_K_BUDGET, DEFAULT_WINDOW
from ..hilbert import DEFAULT_POWER_BUDGET
from ..ideal import Ideal
from ..parse import ParseError, parse_polynomial
from ..reduction import DEFAULT_RETRIES
from ..ring import Ring, RingError

DEFAULT_SEED = 42
BUDGET_KEYS = ("power_budget", "k_budget", "window", "confirm_steps", "retries")
ORDERS = ("degrevlex", "deglex", "lex")


class SpecError(ValueError):
    """A spec-file problem, located by 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0, source: str = "<spec>"):
        where = f"{source}:{line}:{column}: " if line else f"{source}: "
        super().__init__(where + message)
        self.message = message
        self.line = line
        self.column = column


def default_budgets() -> dict:
    return {
        "power_budget": DEFAULT_POWER_BUDGET,
        "k_budget": DEFAULT_K_BUDGET,
        "window": DEFAULT_WINDOW,
        "confirm_steps": DEFAULT_CONFIRM_STEPS,
        "retries": DEFAULT_RETRIES,
    }


@dataclass
class IdealSpec:
    variables: list
    field: str = "Q"
    order: str = "degrevlex"
    relations: list = dataclasses.field(default_factory=list)
    generators: list = dataclasses.field(default_factory=list)
    reduction: list = dataclasses.field(default_factory=list)
    dimension: int | None = None
    integrally_closed: bool = False
    budgets: dict = dataclasses.field(default_factory=default_budgets)
    seed: int = DEFAULT_SEED
    name: str = "<spec>"
    # (line, column) of each polynomial, for error messages
    _where: dict = dataclasses.field(default_factory=dict, repr=False, compare=False)

    def build(self):
        """``(ring, ideal, pinned J or None)``; raises SpecError."""
        try:
            F = parse_field(self.field)
        except FieldError as exc:
            raise SpecError(str(exc), *self._where.get(("field", 0), (0, 0)), self.name) from None
        try:
            plain = Ring(self.variables, F, self.order)
        except (RingError, ValueError) as exc:
            raise SpecError(str(exc), *self._where.get(("ring", 0), (0, 0)), self.name) from None
        rels = [self._poly(plain, "mod", i, t) for i, t in enumerate(self.relations)]
        ring = plain
        if rels:
            try:
                ring = plain.with_relations(rels, dimension=self.dimension)
                ring.dimension
            except RingError as exc:
                raise SpecError(str(exc), *self._where.get(("mod", 0), (0, 0)), self.name) from None
        elif self.dimension is not None and self.dimension != plain.nvars:
            raise SpecError(f"declared dimension {self.dimension} but the polynomial ring has "
                            f"dimension {plain.nvars}", *self._where.get(("dim", 0), (0, 0)), self.name)
        gens = [self._poly(ring, "ideal", i, t) for i, t in enumerate(self.generators)]
        ideal = Ideal(ring, gens)
        if ideal.is_zero():
            raise SpecError("ideal is zero, not m-primary", *self._where.get(("ideal", 0), (0, 0)),
                            self.name)
        pinned = None
        if self.reduction:
            pinned = Ideal(ring, [self._poly(ring, "reduction", i, t)
                                  for i, t in enumerate(self.reduction)])
        return ring, ideal, pinned

    def _poly(self, ring, kind, i, text):
        try:
            return parse_polynomial(text, ring)
        except ParseError as exc:
            line, col = self._where.get((kind, i), (0, 0))
            raise SpecError(exc.message, line, col + exc.position if line else 0, self.name) from None

    def to_text(self) -> str:
        lines = [f"ring {','.join(self.variables)} over {self.field} order {self.order}"]
        if self.relations:
            lines.append("mod " + "; ".join(self.relations))
        if self.dimension is not None:
            lines.append(f"dim {self.dimension}")
        lines.append("ideal " + "; ".join(self.generators))
        if self.reduction:
            lines.append("reduction " + "; ".join(self.reduction))
        if self.integrally_closed:
            lines.append("assert integrally_closed")
        for k in BUDGET_KEYS:
            if self.budgets[k] != default_budgets()[k]:
                lines.append(f"set {k}={self.budgets[k]}")
        lines.append(f"seed {self.seed}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "ring": {"variables": list(self.variables), "field": self.field, "order": self.order,
                     "relations": list(self.relations), "dimension": self.dimension},
            "ideal": list(self.generators),
            "reduction": list(self.reduction),
            "assertions": {"integrally_closed": self.integrally_closed},
            "budgets": dict(self.budgets),
            "seed": self.seed,
        }


_INT = re.compile(r"-?\d+$")


def _split_polys(body: str, offset: int):
    """Split ``a; b; c`` into (text, column) pairs, columns 1-based."""
    out = []
    start = 0
    for part in body.split(";"):
        stripped = part.strip()
        lead = len(part) - len(part.lstrip())
        if stripped:
            out.append((stripped, offset + start + lead + 1))
        start += len(part) + 1
    return out


def parse_spec(text: str, name: str = "<spec>") -> IdealSpec:
    spec = None
    generators, relations, reduction = [], [], []
    where: dict = {}
    dimension = None
    closed = False
    budgets = default_budgets()
    seed = DEFAULT_SEED
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        stripped = line.strip()
        head, _, rest = stripped.partition(" ")
        body_col = indent + len(head) + 1 + (len(rest) - len(rest.lstrip()))
        rest = rest.strip()
        col0 = indent + 1

        def err(msg, col=col0):
            return SpecError(msg, lineno, col, name)

        if head == "ring":
            if spec is not None:
                raise err("duplicate ring declaration")
            m = re.fullmatch(r"(.+?)(?:\s+over\s+(\S+))?(?:\s+order\s+(\S+))?", rest)
            if not m:
                raise err("expected 'ring <vars> [over <field>] [order <order>]'", body_col + 1)
            variables = [v.strip() for v in m.group(1).split(",") if v.strip()]
            if not variables:
                raise err("no variables declared", body_col + 1)
            order = m.group(3) or "degrevlex"
            if order not in ORDERS:
                raise err(f"unknown monomial order {order!r}", body_col + 1 + m.start(3))
            spec = IdealSpec(variables=variables, field=m.group(2) or "Q", order=order, name=name)
            where[("ring", 0)] = (lineno, body_col + 1)
            where[("field", 0)] = (lineno, body_col + 1 + (m.start(2) if m.group(2) else 0))
            continue
        if spec is None:
            raise err("the first directive must be 'ring'")
        if head in ("ideal", "mod", "reduction"):
            target = {"ideal": generators, "mod": relations, "reduction": reduction}[head]
            parts = _split_polys(rest, body_col)
            if not parts and head != "ideal":
                raise err(f"'{head}' needs at least one polynomial", body_col + 1)
            for poly, col in parts:
                where[(head, len(target))] = (lineno, col)
                target.append(poly)
            where.setdefault((head, 0), (lineno, body_col + 1))
        elif head == "dim":
            if not _INT.match(rest) or int(rest) < 0:
                raise err("expected a non-negative integer", body_col + 1)
            dimension = int(rest)
            where[("dim", 0)] = (lineno, body_col + 1)
        elif head == "assert":
            if rest != "integrally_closed":
                raise err(f"unknown assertion {rest!r}", body_col + 1)
            closed = True
        elif head == "set":
            key, eq, value = rest.partition("=")
            key, value = key.strip(), value.strip()
            if not eq or key not in BUDGET_KEYS:
                raise err(f"expected 'set <key>=<int>' with key in {', '.join(BUDGET_KEYS)}",
                          body_col + 1)
            if not _INT.match(value) or int(value) < 1:
                raise err(f"{key} must be a positive integer", body_col + 1 + rest.index("=") + 1)
            budgets[key] = int(value)
        elif head == "seed":
            if not _INT.match(rest):
                raise err("expected an integer seed", body_col + 1)
            seed = int(rest)
        else:
            raise err(f"unknown directive {head!r}")
    if spec is None:
        raise SpecError("missing 'ring' declaration", 0, 0, name)
    spec.generators = generators
    spec.relations = relations
    spec.reduction = reduction
    spec.dimension = dimension
    spec.integrally_closed = closed
    spec.budgets = budgets
    spec.seed = seed
    spec._where = where
    return spec


def load_spec(path: str) -> IdealSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read(), name=path)
