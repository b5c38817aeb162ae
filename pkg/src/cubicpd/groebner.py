"""Buchberger's algorithm, normal forms and reduced Gröbner bases.

Internally polynomials are plain ``dict`` objects mapping packed monomial
keys to coefficients (see :mod:`cubicpd.polyring`); the public functions
accept and return :class:`~cubicpd.polyring.Polynomial` values.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import _budget
from .polyring import Monomial, PolyRing, Polynomial, RingMismatchError

__all__ = [
    "GroebnerBasis",
    "SPair",
    "buchberger",
    "normal_form",
    "lead_ideal",
    "is_groebner",
    "spoly",
]


@dataclass(frozen=True, order=True)
class SPair:
    """A critical pair, ordered for selection by (sugar, lcm)."""

    sugar: int
    lcm: int
    i: int
    j: int


def _ring_of(polys: Sequence[Polynomial], ring: PolyRing | None = None) -> PolyRing:
    for f in polys:
        if ring is None:
            ring = f.ring
        elif f.ring != ring:
            raise RingMismatchError("polynomials belong to different rings")
    if ring is None:
        raise ValueError("cannot infer the ring of an empty list")
    return ring


def _monic(R: PolyRing, t: dict) -> dict:
    lc = t[max(t)]
    if lc == 1:
        return t
    inv = R.field.inv(lc)
    p = R.char
    if p:
        return {k: v * inv % p for k, v in t.items()}
    return {k: v * inv for k, v in t.items()}


def _reduce(R: PolyRing, f: dict, basis: Sequence[tuple[int, int, dict]], full: bool = True) -> dict:
    """Reduce ``f`` (consumed) by ``basis``, a list of ``(lead, lead & LOW,
    monic terms)`` triples.  Returns the remainder as a new dict."""
    if not f or not basis:
        return f
    p = R.char
    LOW = R.low_mask
    G = R.guard
    heap = [-k for k in f]
    heapq.heapify(heap)
    pop, push = heapq.heappop, heapq.heappush
    rem = {}
    while heap:
        k = -pop(heap)
        c = f.pop(k, None)
        if c is None:
            continue
        kl = (k & LOW) | G
        for gk, gl, g in basis:
            if (kl - gl) & G == G:
                s = k - gk
                if p:
                    for kk, v in g.items():
                        if kk == gk:
                            continue
                        kk += s
                        w = f.get(kk)
                        if w is None:
                            f[kk] = (-c * v) % p
                            push(heap, -kk)
                        else:
                            w = (w - c * v) % p
                            if w:
                                f[kk] = w
                            else:
                                del f[kk]
                else:
                    for kk, v in g.items():
                        if kk == gk:
                            continue
                        kk += s
                        w = f.get(kk)
                        if w is None:
                            f[kk] = -c * v
                            push(heap, -kk)
                        else:
                            w = w - c * v
                            if w:
                                f[kk] = w
                            else:
                                del f[kk]
                break
        else:
            rem[k] = c
            if not full:
                rem.update(f)
                return rem
    return rem


def _as_basis(R: PolyRing, polys: Iterable[dict]) -> list[tuple[int, int, dict]]:
    out = []
    for t in polys:
        t = _monic(R, t)
        k = max(t)
        out.append((k, k & R.low_mask, t))
    return out


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Gröbner basis: monic elements sorted by leading monomial
    (ascending)."""

    ring: PolyRing
    elements: tuple[Polynomial, ...]
    _basis: list = field(default=None, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self._basis is None:
            object.__setattr__(self, "_basis", _as_basis(self.ring, (g._t for g in self.elements)))

    @property
    def order(self):
        return self.ring.order

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def is_unit(self) -> bool:
        return len(self.elements) == 1 and self.elements[0].is_constant()

    def is_zero(self) -> bool:
        return not self.elements

    def lead_keys(self) -> list[int]:
        return [b[0] for b in self._basis]

    def reduce(self, f: Polynomial) -> Polynomial:
        if f.ring != self.ring:
            raise RingMismatchError("polynomial belongs to a different ring")
        return Polynomial(self.ring, _reduce(self.ring, dict(f._t), self._basis))

    def contains(self, f: Polynomial) -> bool:
        if f.ring != self.ring:
            raise RingMismatchError("polynomial belongs to a different ring")
        return not _reduce(self.ring, dict(f._t), self._basis, full=False)

    def lead_monomials(self) -> list[Monomial]:
        return [Monomial(self.ring.exps(k)) for k in self.lead_keys()]

    def format(self) -> list[str]:
        return [g.format() for g in self.elements]


def normal_form(f: Polynomial, G: Sequence[Polynomial] | GroebnerBasis) -> Polynomial:
    """Fully reduced remainder of ``f`` modulo the leading terms of ``G``.

    Any list of polynomials is accepted; the result is unique only when
    ``G`` is a Gröbner basis.
    """
    if isinstance(G, GroebnerBasis):
        return G.reduce(f)
    R = _ring_of(list(G), f.ring)
    basis = _as_basis(R, (g._t for g in G if g))
    return Polynomial(R, _reduce(R, dict(f._t), basis))


def spoly(f: Polynomial, g: Polynomial) -> Polynomial:
    R = _ring_of([f, g])
    return Polynomial(R, _spoly(R, _monic(R, f._t), _monic(R, g._t)))


def _spoly(R: PolyRing, f: dict, g: dict) -> dict:
    fk, gk = max(f), max(g)
    L = R.lcm_key(fk, gk)
    a, b = L - fk, L - gk
    p = R.char
    d = {k + a: v for k, v in f.items()}
    for k, v in g.items():
        k += b
        w = d.get(k, 0) - v
        if p:
            w %= p
        if w:
            d[k] = w
        else:
            d.pop(k, None)
    return d


def _interreduce(R: PolyRing, polys: list[dict]) -> list[dict]:
    """Reduced basis from a Gröbner basis given as monic dicts."""
    polys = [_monic(R, t) for t in polys if t]
    polys.sort(key=max)
    keep: list[dict] = []
    leads: list[int] = []
    for t in polys:
        k = max(t)
        if any(R.divides_key(l, k) for l in leads):
            continue
        keep.append(t)
        leads.append(k)
    out = []
    for i, t in enumerate(keep):
        others = [(leads[j], leads[j] & R.low_mask, keep[j]) for j in range(len(keep)) if j != i]
        lk = leads[i]
        tail = dict(t)
        del tail[lk]
        red = _reduce(R, tail, others)
        red[lk] = R.field(1)
        out.append(red)
    out.sort(key=max)
    return out


def buchberger(
    gens: Sequence[Polynomial],
    *,
    criteria: bool = True,
    degree_bound: int | None = None,
    ring: PolyRing | None = None,
) -> GroebnerBasis:
    """Reduced Gröbner basis of the ideal generated by ``gens``.

    ``criteria`` toggles the product criterion and Gebauer–Möller pair
    elimination.  ``degree_bound`` stops after all pairs of (sugar) degree
    at most the bound have been treated, which yields a truncated basis for
    homogeneous input.
    """
    gens = list(gens)
    if not gens and ring is None:
        raise ValueError("buchberger needs at least one generator or an explicit ring")
    R = _ring_of(gens, ring) if gens else ring
    basis, _ = _buchberger(R, [g._t for g in gens], criteria, degree_bound)
    return GroebnerBasis(R, tuple(Polynomial(R, t) for t in basis))


def _buchberger(
    R: PolyRing, gens: list[dict], criteria: bool = True, degree_bound: int | None = None
) -> tuple[list[dict], list[int]]:
    """Reduced basis together with the indices of the generators that were
    not redundant when they entered (for homogeneous input these form a
    minimal generating set)."""
    polys: list[dict] = []
    leads: list[int] = []
    sugars: list[int] = []
    active: list[int] = []
    pairs: list[SPair] = []
    kd = R.key_degree
    lcm = R.lcm_key
    div = R.divides_key
    coprime = R.coprime_keys
    LOW = R.low_mask

    def reducers():
        return [(leads[i], leads[i] & LOW, polys[i]) for i in active]

    def add(h: dict, sugar: int):
        hk = max(h)
        idx = len(polys)
        polys.append(h)
        leads.append(hk)
        sugars.append(sugar)
        if not criteria:
            for i in active:
                L = lcm(leads[i], hk)
                s = max(sugars[i] + kd(L - leads[i]), sugar + kd(L - hk))
                heapq.heappush(pairs, SPair(s, L, i, idx))
            active.append(idx)
            return
        # Gebauer–Möller update
        C = [(i, lcm(leads[i], hk)) for i in active]
        D = []
        while C:
            i, L = C.pop(0)
            cop = coprime(leads[i], hk)
            if cop or not (any(div(L2, L) for _, L2 in C) or any(div(L2, L) for _, L2, _ in D)):
                D.append((i, L, cop))
        kept = []
        for sp in pairs:
            L = sp.lcm
            if div(hk, L) and lcm(leads[sp.i], hk) != L and lcm(leads[sp.j], hk) != L:
                continue
            kept.append(sp)
        for i, L, cop in D:
            if cop:
                continue
            s = max(sugars[i] + kd(L - leads[i]), sugar + kd(L - hk))
            kept.append(SPair(s, L, i, idx))
        heapq.heapify(kept)
        pairs[:] = kept
        active[:] = [i for i in active if not div(hk, leads[i])] + [idx]

    # generators enter when the pair queue reaches their degree, after the
    # S-pairs of that degree; a generator reducing to zero is redundant
    queue = []
    for n, t in enumerate(gens):
        if t:
            queue.append((max(kd(k) for k in t), max(t), n))
    queue.sort(reverse=True)
    kept: list[int] = []
    unit = [{0: R.field(1)}]

    while pairs or queue:
        _budget.check()
        if queue and (not pairs or queue[-1][0] < pairs[0].sugar):
            s, _, n = queue.pop()
            if degree_bound is not None and s > degree_bound:
                break
            h = _reduce(R, dict(gens[n]), reducers())
            if h:
                kept.append(n)
        else:
            sp = heapq.heappop(pairs)
            s = sp.sugar
            if degree_bound is not None and s > degree_bound:
                break
            h = _reduce(R, _spoly(R, polys[sp.i], polys[sp.j]), reducers())
        if not h:
            continue
        if max(h) == 0:
            return unit, kept
        add(_monic(R, h), s)

    return _interreduce(R, [polys[i] for i in active]), kept


def lead_ideal(G: GroebnerBasis) -> list[Monomial]:
    """Minimal monomial generators of the initial ideal of ``G``."""
    R = G.ring
    keys = sorted(G.lead_keys())
    out = []
    for k in keys:
        if not any(R.divides_key(l, k) for l in out):
            out.append(k)
    return [Monomial(R.exps(k)) for k in out]


def is_groebner(polys: Sequence[Polynomial], ring: PolyRing | None = None) -> bool:
    """True iff every S-polynomial reduces to zero (Buchberger criterion)."""
    polys = [f for f in polys if f]
    if not polys:
        return True
    R = _ring_of(polys, ring)
    ts = [_monic(R, f._t) for f in polys]
    basis = _as_basis(R, ts)
    for i in range(len(ts)):
        for j in range(i + 1, len(ts)):
            if R.coprime_keys(basis[i][0], basis[j][0]):
                continue
            if _reduce(R, _spoly(R, ts[i], ts[j]), basis, full=False):
                return False
    return True
