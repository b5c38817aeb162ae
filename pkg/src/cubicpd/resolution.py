"""Graded free resolutions via Schreyer frames.

Starting from a reduced Gröbner basis ``g_1..g_m`` of ``I``, Schreyer's
construction yields a Gröbner basis of the syzygy module for the induced
order, and iterating gives a (usually non-minimal) free resolution of
``R/I``.  Two things are then read off:

* Betti numbers, as the homology of the resolution tensored with the
  field, i.e. from ranks of the constant parts of the differentials;
* a minimal resolution, by cancelling unit entries of the differentials.

Module elements are dicts over packed integer keys.  A term ``m*e_j`` of
the level-``l`` free module has key
``((W_j + (key(m) << s_{l-1})) << b_l) | r_j`` where ``W_j`` is the key of
the leading term of the ``j``-th basis element's image, ``b_l`` bits hold
``r_j = N_l - 1 - j`` and ``s_l = s_{l-1} + b_l``.  Integer order of keys is
the Schreyer order (ties broken in favour of the smaller index), and
multiplying by a monomial ``x^c`` adds ``key(c) << s_l``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Sequence

from . import _budget
from .hilbert import minimal_monomials, poly_add, _trim
from .linalg import Echelon
from .polyring import PolyRing, Polynomial

__all__ = ["BettiTable", "FreeComplex", "SchreyerFrame", "schreyer_frame", "minimal_resolution"]


@dataclass(frozen=True)
class BettiTable:
    """Graded Betti numbers ``beta[(i, j)]`` (only nonzero entries)."""

    entries: dict

    @property
    def pd(self) -> int:
        return max((i for i, _ in self.entries), default=-1)

    def total(self, i: int) -> int:
        return sum(v for (a, _), v in self.entries.items() if a == i)

    def totals(self) -> list[int]:
        return [self.total(i) for i in range(self.pd + 1)]

    def __getitem__(self, ij) -> int:
        return self.entries.get(tuple(ij), 0)

    def triples(self) -> list[tuple[int, int, int]]:
        return sorted((i, j, v) for (i, j), v in self.entries.items())

    def numerator(self) -> list[int]:
        """``sum_i (-1)^i sum_j beta_ij t^j``."""
        top = max((j for _, j in self.entries), default=0)
        out = [0] * (top + 1)
        for (i, j), v in self.entries.items():
            out[j] += (-1) ** i * v
        return _trim(out)

    def format(self) -> str:
        if not self.entries:
            return "(zero module)"
        pd = self.pd
        rows = sorted({j - i for i, j in self.entries})
        lo, hi = rows[0], rows[-1]
        cols = range(pd + 1)
        cells = [[str(self.entries.get((i, i + r), 0) or ".") for i in cols] for r in range(lo, hi + 1)]
        totals = [str(self.total(i)) for i in cols]
        width = max(len(c) for c in [*totals, *(x for row in cells for x in row), str(pd)])
        label = max(len("total:"), len(f"{hi}:"), len(f"{lo}:"))
        out = [" " * label + " " + " ".join(str(i).rjust(width) for i in cols)]
        out.append("total:".rjust(label) + " " + " ".join(t.rjust(width) for t in totals))
        for r, row in zip(range(lo, hi + 1), cells):
            out.append(f"{r}:".rjust(label) + " " + " ".join(c.rjust(width) for c in row))
        return "\n".join(out)

    def __str__(self):
        return self.format()


@dataclass
class FreeComplex:
    """``F_0 <- F_1 <- ... <- F_p`` with ``F_i = sum R(-degrees[i][a])``.

    ``maps[i]`` is the differential ``F_{i+1} -> F_i`` as a list of columns,
    each column a dict ``row index -> Polynomial``.
    """

    ring: PolyRing
    degrees: list[list[int]]
    maps: list[list[dict]]

    @property
    def length(self) -> int:
        return len(self.degrees) - 1

    def rank(self, i: int) -> int:
        return len(self.degrees[i]) if 0 <= i < len(self.degrees) else 0

    def matrix(self, i: int) -> list[list[Polynomial]]:
        """Differential ``F_i -> F_{i-1}`` as a dense row-major matrix."""
        R = self.ring
        cols = self.maps[i - 1]
        rows = self.rank(i - 1)
        return [[col.get(r, R.zero()) for col in cols] for r in range(rows)]

    def composition_is_zero(self) -> bool:
        R = self.ring
        for i in range(1, len(self.maps)):
            lower, upper = self.maps[i - 1], self.maps[i]
            for col in upper:
                acc: dict = {}
                for k, a in col.items():
                    for r, b in lower[k].items():
                        acc[r] = acc.get(r, R.zero()) + b * a
                if any(v for v in acc.values()):
                    return False
        return True

    def is_minimal(self) -> bool:
        return all(not any(0 in e._t for e in col.values()) for m in self.maps for col in m)

    def is_graded(self) -> bool:
        for i, m in enumerate(self.maps):
            for a, col in enumerate(m):
                for r, e in col.items():
                    if e and e.degrees() != {self.degrees[i + 1][a] - self.degrees[i][r]}:
                        return False
        return True

    def betti(self) -> BettiTable:
        ent: dict = {}
        for i, ds in enumerate(self.degrees):
            for d in ds:
                ent[(i, d)] = ent.get((i, d), 0) + 1
        return BettiTable(ent)


class _Level:
    """Basis data of one free module in the frame."""

    def __init__(self, leads: list[int], comps: list[int], monos: list[int], degs: list[int], s_prev: int):
        self.N = len(leads)
        self.b = max(1, (self.N - 1).bit_length()) if self.N > 1 else 1
        self.mask = (1 << self.b) - 1
        self.W = leads  # lead keys of the images, in the previous level's keys
        self.comps = comps
        self.monos = monos
        self.degs = degs
        self.s_prev = s_prev
        self.s = s_prev + self.b

    def key(self, j: int, mono: int = 0) -> int:
        return ((self.W[j] + (mono << self.s_prev)) << self.b) | (self.N - 1 - j)

    def decode(self, T: int) -> tuple[int, int]:
        j = self.N - 1 - (T & self.mask)
        return j, ((T >> self.b) - self.W[j]) >> self.s_prev


class _Base:
    """The ring itself as level 0: a single component, keys are monomials."""

    N = 1
    s = 0
    degs = [0]

    @staticmethod
    def decode(T):
        return 0, T


@dataclass
class SchreyerFrame:
    ring: PolyRing
    levels: list  # levels[0] is the ring; levels[l] describes F_l
    elements: list  # elements[l] = list of dicts in F_{l-1} keys (images of F_l basis)

    @property
    def length(self) -> int:
        return len(self.levels) - 1

    def ranks(self) -> list[int]:
        return [lv.N for lv in self.levels]

    def constant_rank(self, l: int, degree: int) -> int:
        """Rank of the degree-``degree`` block of ``d_l`` tensored with k."""
        if l < 1 or l >= len(self.levels):
            return 0
        lv, prev = self.levels[l], self.levels[l - 1]
        E = Echelon(self.ring.field)
        for a, tau in enumerate(self.elements[l]):
            if lv.degs[a] != degree:
                continue
            row = {}
            for T, c in tau.items():
                j, m = prev.decode(T)
                if m == 0:
                    row[j] = c
            if row:
                E.add(row)
        return len(E)

    def betti(self) -> BettiTable:
        ent = {}
        for l, lv in enumerate(self.levels):
            for d in set(lv.degs):
                n = lv.degs.count(d)
                n -= self.constant_rank(l, d) + self.constant_rank(l + 1, d)
                if n:
                    ent[(l, d)] = n
        return BettiTable(ent)

    def complex(self) -> FreeComplex:
        R = self.ring
        maps = []
        for l in range(1, len(self.levels)):
            prev = self.levels[l - 1]
            cols = []
            for tau in self.elements[l]:
                col: dict = {}
                for T, c in tau.items():
                    j, m = prev.decode(T)
                    col.setdefault(j, {})[m] = c
                cols.append({j: Polynomial(R, t) for j, t in col.items()})
            maps.append(cols)
        return FreeComplex(R, [list(lv.degs) for lv in self.levels], maps)


def _lex_desc(R: PolyRing, mono: int):
    return tuple(-e for e in R.exps(mono))


def schreyer_frame(R: PolyRing, gb: Sequence[Polynomial]) -> SchreyerFrame:
    """Frame of the resolution of ``R/(gb)``; ``gb`` must be a reduced
    Gröbner basis of a proper homogeneous ideal."""
    base = _Base()
    levels: list = [base]
    elements: list = [[]]
    if not gb:
        return SchreyerFrame(R, levels, elements)
    if any(g.is_constant() for g in gb):
        raise ValueError("the unit ideal has no resolution")
    p = R.char
    F = R.field
    # level 1: the Gröbner basis, sorted lex-descending on leading monomials
    gens = sorted((dict(g.monic()._t) for g in gb), key=lambda t: _lex_desc(R, max(t)))
    leads = [max(t) for t in gens]
    levels.append(_Level(leads, [0] * len(gens), leads[:], [R.key_degree(k) for k in leads], 0))
    elements.append(gens)
    LOW = R.low_mask
    GUARD = R.guard

    while True:
        _budget.check()
        cur = levels[-1]
        prev = levels[-2]
        taus = elements[-1]
        # reducers grouped by component of the leading term
        bycomp: dict[int, list] = {}
        for c in range(cur.N):
            bycomp.setdefault(cur.comps[c], []).append((cur.monos[c] & LOW, c))
        new = []  # (a, n_mono, syzygy dict in cur keys)
        for a in range(cur.N):
            ca = cur.comps[a]
            ea = R.exps(cur.monos[a])
            cands = []
            for _, b in bycomp[ca]:
                if b <= a:
                    continue
                eb = R.exps(cur.monos[b])
                cands.append(tuple(max(0, y - x) for x, y in zip(ea, eb)))
            if not cands:
                continue
            for n in minimal_monomials(cands):
                _budget.check()
                nk = R.encode(n)
                target = cur.monos[a] + nk
                tl = (target & LOW) | GUARD
                b = next(b for _, b in bycomp[ca] if b > a and (tl - (cur.monos[b] & LOW)) & GUARD == GUARD)
                syz = _syzygy(R, cur, prev, taus, bycomp, a, b, nk, target - cur.monos[b])
                new.append((a, nk, syz))
        if not new:
            break
        new.sort(key=lambda x: (x[0], _lex_desc(R, x[1])))
        W = [cur.key(a, nk) for a, nk, _ in new]
        comps = [a for a, _, _ in new]
        monos = [nk for _, nk, _ in new]
        degs = [cur.degs[a] + R.key_degree(nk) for a, nk, _ in new]
        levels.append(_Level(W, comps, monos, degs, cur.s))
        elements.append([s for _, _, s in new])
    return SchreyerFrame(R, levels, elements)


def _syzygy(R, cur: _Level, prev, taus, bycomp, a, b, na, nb) -> dict:
    """Syzygy ``na*e_a - nb*e_b - sum q_c e_c`` of the level's elements,
    in the current level's keys."""
    p = R.char
    LOW = R.low_mask
    GUARD = R.guard
    sp = prev.s
    f: dict = {}
    sa, sb = na << sp, nb << sp
    for T, c in taus[a].items():
        f[T + sa] = c
    for T, c in taus[b].items():
        T += sb
        w = f.get(T, 0) - c
        if p:
            w %= p
        if w:
            f[T] = w
        else:
            f.pop(T, None)
    one = R.field(1)
    syz = {cur.key(a, na): one, cur.key(b, nb): (p - 1) if p else -one}
    heap = [-T for T in f]
    heapq.heapify(heap)
    pop, push = heapq.heappop, heapq.heappush
    decode = prev.decode
    W = cur.W
    bl = cur.b
    N1 = cur.N - 1
    while heap:
        T = -pop(heap)
        coef = f.pop(T, None)
        if coef is None:
            continue
        j, m = decode(T)
        ml = (m & LOW) | GUARD
        for cl, c in bycomp.get(j, ()):
            if (ml - cl) & GUARD == GUARD:
                break
        else:
            raise ArithmeticError("Schreyer reduction left a remainder")
        shift = T - W[c]
        syz[(T << bl) | (N1 - c)] = (-coef) % p if p else -coef
        for kk, v in taus[c].items():
            kk += shift
            if kk == T:
                continue
            w = f.get(kk)
            if w is None:
                f[kk] = (-coef * v) % p if p else -coef * v
                push(heap, -kk)
            else:
                w = (w - coef * v) % p if p else w - coef * v
                if w:
                    f[kk] = w
                else:
                    del f[kk]
    return syz


def minimal_resolution(C: FreeComplex) -> FreeComplex:
    """Cancel unit entries of the differentials until none remain."""
    R = C.ring
    F = R.field
    degrees = [list(d) for d in C.degrees]
    maps = [[dict(col) for col in m] for m in C.maps]
    alive = [list(range(len(d))) for d in degrees]
    alive = [set(a) for a in alive]
    for k in range(len(maps)):
        # d_{k+1}: F_{k+1} -> F_k is maps[k]
        while True:
            _budget.check()
            hit = None
            for c in alive[k + 1]:
                col = maps[k][c]
                for r, e in col.items():
                    if r in alive[k] and e.is_constant() and e:
                        hit = (r, c, e._t[0])
                        break
                if hit:
                    break
            if hit is None:
                break
            r, c, u = hit
            uinv = F.inv(u)
            pivot_col = maps[k][c]
            for j in alive[k + 1]:
                if j == c:
                    continue
                col = maps[k][j]
                beta = col.get(r)
                if not beta:
                    continue
                factor = beta.scale(uinv)
                for i, g in pivot_col.items():
                    if i == r:
                        continue
                    v = col.get(i, R.zero()) - factor * g
                    if v:
                        col[i] = v
                    else:
                        col.pop(i, None)
                col.pop(r, None)
            alive[k + 1].discard(c)
            alive[k].discard(r)
            # delete row c of d_{k+2} and column r of d_k
            if k + 1 < len(maps):
                for col in maps[k + 1]:
                    col.pop(c, None)
    # renumber
    new_deg = []
    index = []
    for i, d in enumerate(degrees):
        keep = sorted(alive[i])
        index.append({old: new for new, old in enumerate(keep)})
        new_deg.append([d[j] for j in keep])
    new_maps = []
    for k, m in enumerate(maps):
        cols = []
        for old in sorted(alive[k + 1]):
            col = m[old]
            cols.append({index[k][r]: e for r, e in col.items() if r in index[k] and e})
        new_maps.append(cols)
    while len(new_deg) > 1 and not new_deg[-1]:
        new_deg.pop()
        new_maps.pop()
    return FreeComplex(R, new_deg, new_maps)
