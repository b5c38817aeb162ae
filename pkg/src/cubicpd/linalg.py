"""Sparse exact row reduction over QQ or GF(p).

Rows are dicts ``column -> coefficient``; columns are any orderable
hashable values, and the pivot of a row is its largest column.
"""

from __future__ import annotations

from typing import Iterable

from .polyring import FieldSpec

__all__ = ["Echelon", "rank", "row_echelon"]


class Echelon:
    """Incrementally built echelon form.  :meth:`add` reduces a row against
    the current pivots and keeps it if something survives."""

    def __init__(self, field: FieldSpec):
        self.field = field
        self.pivots: dict = {}

    def __len__(self):
        return len(self.pivots)

    def reduce(self, row: dict) -> dict:
        """Remainder of ``row`` after eliminating every pivot column."""
        p = self.field.char
        row = {c: v for c, v in row.items() if v}
        piv = self.pivots
        if not piv:
            return row
        todo = sorted((c for c in row if c in piv), reverse=True)
        while todo:
            c = todo.pop(0)
            a = row.pop(c, 0)
            if not a:
                continue
            for cc, v in piv[c].items():
                if cc == c:
                    continue
                w = row.get(cc, 0) - a * v
                if p:
                    w %= p
                if w:
                    if cc not in row and cc in piv:
                        _insert_desc(todo, cc)
                    row[cc] = w
                else:
                    row.pop(cc, None)
        return row

    def add(self, row: dict) -> dict | None:
        """Insert ``row``; returns the new monic pivot row or ``None`` when
        ``row`` was dependent."""
        r = self.reduce(row)
        if not r:
            return None
        c = max(r)
        inv = self.field.inv(r[c])
        p = self.field.char
        r = {k: (v * inv % p if p else v * inv) for k, v in r.items()}
        self.pivots[c] = r
        return r

    def rows(self) -> list[dict]:
        return list(self.pivots.values())

    def reduced_rows(self) -> list[dict]:
        """Fully reduced echelon form (each pivot column appears in one row),
        sorted by descending pivot."""
        final = Echelon(self.field)
        for c in sorted(self.pivots):
            row = self.pivots[c]
            tail = final.reduce({k: v for k, v in row.items() if k != c})
            tail[c] = row[c]
            final.pivots[c] = tail
        return [final.pivots[c] for c in sorted(final.pivots, reverse=True)]


def _insert_desc(lst: list, x) -> None:
    lo, hi = 0, len(lst)
    while lo < hi:
        mid = (lo + hi) // 2
        if lst[mid] > x:
            lo = mid + 1
        else:
            hi = mid
    lst.insert(lo, x)


def row_echelon(rows: Iterable[dict], field: FieldSpec) -> list[dict]:
    E = Echelon(field)
    for r in rows:
        E.add(r)
    return E.reduced_rows()


def rank(rows: Iterable[dict], field: FieldSpec) -> int:
    E = Echelon(field)
    for r in rows:
        E.add(r)
    return len(E)
