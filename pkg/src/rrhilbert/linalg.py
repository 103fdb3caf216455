"""Sparse exact linear algebra over a CoefficientField.

Vectors are dicts ``{column: coefficient}`` with integer columns; the pivot
of a stored row is its largest column.
"""

from __future__ import annotations

from heapq import heapify, heappop, heappush


class SparseEchelon:
    def __init__(self, field):
        self.field = field
        self.rows: dict[int, dict] = {}  # pivot column -> monic row
        self.tags: dict[int, dict] = {}  # pivot column -> combination of inputs

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: dict, tag: dict | None = None):
        """Eliminate every pivot column from ``vec``; returns (vec, tag)."""
        rows = self.rows
        if not rows:
            return dict(vec), (dict(tag) if tag is not None else None)
        p = self.field.p
        work = dict(vec)
        tag = dict(tag) if tag is not None else None
        heap = [-k for k in work if k in rows]
        heapify(heap)
        seen = set(heap)
        while heap:
            k = -heappop(heap)
            c = work.pop(k, None)
            if not c:
                continue
            row = rows[k]
            for col, v in row.items():
                if col == k:
                    continue
                old = work.get(col)
                nv = -c * v if old is None else old - c * v
                if p:
                    nv %= p
                work[col] = nv
                if col in rows and -col not in seen:
                    seen.add(-col)
                    heappush(heap, -col)
            if tag is not None:
                for lab, v in self.tags[k].items():
                    old = tag.get(lab)
                    nv = -c * v if old is None else old - c * v
                    if p:
                        nv %= p
                    tag[lab] = nv
        work = {k: v for k, v in work.items() if v}
        if tag is not None:
            tag = {k: v for k, v in tag.items() if v}
        return work, tag

    def add(self, vec: dict, tag: dict | None = None):
        """Insert ``vec``; returns None when it is independent, otherwise the
        tag combination that reduced it to zero."""
        r, t = self.reduce(vec, tag)
        if not r:
            return t if t is not None else {}
        piv = max(r)
        inv = self.field.inv(r[piv])
        p = self.field.p
        if p:
            r = {k: v * inv % p for k, v in r.items()}
            t = {k: v * inv % p for k, v in t.items()} if t is not None else None
        else:
            r = {k: v * inv for k, v in r.items()}
            t = {k: v * inv for k, v in t.items()} if t is not None else None
        self.rows[piv] = r
        if t is not None:
            self.tags[piv] = t
        return None

    def reduced_rows(self) -> dict[int, dict]:
        """Fully reduced echelon form: no pivot column occurs in another row."""
        out: dict[int, dict] = {}
        done = SparseEchelon(self.field)
        for piv in sorted(self.rows):
            row = self.rows[piv]
            rest = {k: v for k, v in row.items() if k != piv}
            rest, _ = done.reduce(rest)
            rest[piv] = self.field.one
            done.rows[piv] = rest
            out[piv] = rest
        return out


def kernel(labelled: list[tuple[int, dict]], field) -> list[dict]:
    """Basis of ``{c : sum c[label] * vec[label] = 0}`` as label dicts."""
    ech = SparseEchelon(field)
    out = []
    for label, vec in labelled:
        dep = ech.add(vec, {label: field.one})
        if dep is not None:
            out.append(dep)
    return out
