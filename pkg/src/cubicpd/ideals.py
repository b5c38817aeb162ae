"""Homogeneous ideals and the usual ideal calculus.

Every :class:`Ideal` carries a lazily computed reduced Gröbner basis in
its ring's order.  Intersections are computed by eliminating an auxiliary
variable ``t`` from ``t*I + (1-t)*J``; colon ideals are obtained from
intersections with principal ideals.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

from . import _budget
from .groebner import GroebnerBasis, _buchberger, _interreduce
from .hilbert import HilbertSeries
from .linalg import Echelon
from .polyring import MonomialOrder, PolyRing, Polynomial, RingMismatchError

__all__ = [
    "Ideal",
    "CompleteIntersectionWitness",
    "NoCompleteIntersection",
    "ideal_sum",
    "product",
    "power",
    "intersect",
    "colon",
    "colon_elem",
    "saturate",
    "member",
    "equal",
    "contains",
    "eliminate",
    "eliminate_polys",
    "degree_part",
    "unmixed_part",
    "minimalize",
    "find_complete_intersection",
    "monomials_of_degree",
    "height",
]


class NoCompleteIntersection(RuntimeError):
    """No complete intersection of the requested shape was found."""


class Ideal:
    """Ideal of a polynomial ring generated by homogeneous polynomials.

    Zero generators are dropped, so the zero ideal has an empty generator
    list.  Generators may be given as polynomials or as strings in the
    ring's syntax.
    """

    def __init__(self, ring: PolyRing, generators: Iterable[Polynomial | str] = (), *, _gb=None):
        gens = []
        for g in generators:
            if isinstance(g, str):
                g = ring.parse(g)
            if g.ring != ring:
                raise RingMismatchError("generator belongs to a different ring")
            if not g:
                continue
            if not g.is_homogeneous():
                raise ValueError(f"generator {g} is not homogeneous")
            gens.append(g)
        self.ring = ring
        self.generators: tuple[Polynomial, ...] = tuple(gens)
        self._gb: GroebnerBasis | None = _gb
        self._mingens: tuple[Polynomial, ...] | None = None
        self._hilbert: HilbertSeries | None = None
        self._frame = None
        self._betti = None

    # -- cached data --------------------------------------------------
    @property
    def gb(self) -> GroebnerBasis:
        if self._gb is None:
            R = self.ring
            basis, kept = _buchberger(R, [g._t for g in self.generators])
            self._gb = GroebnerBasis(R, tuple(Polynomial(R, t) for t in basis))
            if self._mingens is None and not self._gb.is_unit():
                self._mingens = tuple(self.generators[i] for i in sorted(kept))
        return self._gb

    def groebner(self) -> GroebnerBasis:
        return self.gb

    def minimal_generators(self) -> tuple[Polynomial, ...]:
        """A minimal homogeneous generating set chosen among the generators."""
        if self._mingens is None:
            if self.is_unit():
                self._mingens = (self.ring.one(),)
            else:
                _, kept = _buchberger(self.ring, [g._t for g in self.generators])
                self._mingens = tuple(self.generators[i] for i in sorted(kept))
        return self._mingens

    def minimalized(self) -> "Ideal":
        out = Ideal(self.ring, self.minimal_generators(), _gb=self._gb)
        out._mingens = out.generators
        out._hilbert = self._hilbert
        return out

    @property
    def hilbert(self) -> HilbertSeries:
        if self._hilbert is None:
            R = self.ring
            self._hilbert = HilbertSeries.of_monomials(
                (R.exps(k) for k in self.gb.lead_keys()), R.nvars
            )
        return self._hilbert

    # -- predicates ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.generators

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.generators) or self.gb.is_unit()

    def contains(self, f: Polynomial | str) -> bool:
        if isinstance(f, str):
            f = self.ring.parse(f)
        if f.ring != self.ring:
            raise RingMismatchError("polynomial belongs to a different ring")
        if not f:
            return True
        if not self.generators:
            return False
        return self.gb.contains(f)

    __contains__ = contains

    def reduce(self, f: Polynomial) -> Polynomial:
        if not self.generators:
            return f
        return self.gb.reduce(f)

    def issubset(self, other: "Ideal") -> bool:
        _same_ring(self, other)
        return all(other.contains(g) for g in self.generators)

    def __le__(self, other: "Ideal") -> bool:
        return self.issubset(other)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return equal(self, other)

    def __hash__(self):
        return hash((self.ring, tuple(g for g in self.gb)))

    # -- arithmetic sugar ---------------------------------------------
    def __add__(self, other):
        return ideal_sum(self, other)

    def __mul__(self, other):
        return product(self, other)

    def __pow__(self, k: int):
        return power(self, k)

    def __and__(self, other):
        return intersect(self, other)

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            return colon_elem(self, other)
        return colon(self, other)

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def degrees(self) -> list[int]:
        return [g.total_degree() for g in self.generators]

    def format(self) -> str:
        return "ideal(" + ", ".join(g.format() for g in self.generators) + ")"

    def __repr__(self):
        return self.format()


@dataclass(frozen=True)
class CompleteIntersectionWitness:
    generators: tuple[Polynomial, ...]
    verified: bool = False

    def ideal(self) -> Ideal:
        return Ideal(self.generators[0].ring, self.generators)

    @property
    def degrees(self) -> list[int]:
        return [g.total_degree() for g in self.generators]


def _same_ring(*ideals: Ideal) -> PolyRing:
    R = ideals[0].ring
    for I in ideals[1:]:
        if I.ring != R:
            raise RingMismatchError("ideals belong to different rings")
    return R


def _unit(R: PolyRing) -> Ideal:
    return Ideal(R, [R.one()])


# -- sums and products -------------------------------------------------
def ideal_sum(*ideals: Ideal) -> Ideal:
    R = _same_ring(*ideals)
    return Ideal(R, [g for I in ideals for g in I.generators])


def product(I: Ideal, J: Ideal) -> Ideal:
    R = _same_ring(I, J)
    return Ideal(R, [f * g for f in I.generators for g in J.generators])


def power(I: Ideal, k: int) -> Ideal:
    if k < 1:
        raise ValueError("power needs k >= 1")
    out = I
    for _ in range(k - 1):
        out = product(out, I)
    return out


# -- membership and comparison -----------------------------------------
def member(f: Polynomial, I: Ideal) -> bool:
    return I.contains(f)


def contains(I: Ideal, J: Ideal) -> bool:
    """True iff ``J`` is a subset of ``I``."""
    return J.issubset(I)


def equal(I: Ideal, J: Ideal) -> bool:
    _same_ring(I, J)
    if I.is_zero() or J.is_zero():
        return I.is_zero() == J.is_zero()
    return I.gb.elements == J.gb.elements


# -- minimal generators ------------------------------------------------
def minimalize(gens: Sequence[Polynomial]) -> list[Polynomial]:
    """A minimal subset of the homogeneous ``gens`` generating the same
    ideal (processed by increasing degree)."""
    gens = [g for g in gens if g]
    if not gens:
        return []
    return list(Ideal(gens[0].ring, gens).minimal_generators())


# -- intersection and colon --------------------------------------------
def _aux_ring(R: PolyRing) -> tuple[PolyRing, str]:
    name = "t"
    while name in R.index:
        name = "_" + name
    S = PolyRing((name,) + R.variables, R.field, MonomialOrder.block_order(1), (0,) + R.weights)
    return S, name


def _lift(S: PolyRing, f: Polynomial, shift: int) -> dict:
    """Terms of ``f`` moved into the auxiliary ring (variables shifted by
    one) and multiplied by ``t^shift``."""
    R = f.ring
    d = {}
    for k, c in f._t.items():
        d[S.encode((shift,) + R.exps(k))] = c
    return d


def intersect(I: Ideal, J: Ideal) -> Ideal:
    R = _same_ring(I, J)
    if I.is_zero() or J.is_zero():
        return Ideal(R)
    if I.is_unit():
        return J
    if J.is_unit():
        return I
    S, _ = _aux_ring(R)
    p = R.char
    polys = []
    for f in I.generators:
        polys.append(_lift(S, f, 1))
    for g in J.generators:
        a = _lift(S, g, 0)
        b = _lift(S, g, 1)
        for k, c in b.items():
            a[k] = (-c) % p if p else -c
        polys.append(a)
    basis, _ = _buchberger(S, polys)
    out = []
    for t in basis:
        e0 = S.exps(max(t))
        if e0[0]:
            continue
        out.append(R.from_terms((c, S.exps(k)[1:]) for k, c in t.items()))
    return _from_gb(R, out)


def _from_gb(R: PolyRing, gb_elements: list[Polynomial]) -> Ideal:
    """Ideal whose generators are a minimal subset of a reduced GB given in
    the ring's own order."""
    basis = _interreduce(R, [g._t for g in gb_elements])
    G = GroebnerBasis(R, tuple(Polynomial(R, t) for t in basis))
    gens = sorted(G.elements, key=lambda g: (g.total_degree(), g.lead_key))
    I = Ideal(R, gens, _gb=G)
    return I.minimalized()


def colon_elem(I: Ideal, f: Polynomial | str) -> Ideal:
    R = I.ring
    if isinstance(f, str):
        f = R.parse(f)
    if not f:
        raise ValueError("colon by the zero polynomial")
    if f.is_constant() or I.is_unit():
        return I
    if I.is_zero():
        return Ideal(R)
    if I.contains(f):
        return _unit(R)
    inter = intersect(I, Ideal(R, [f]))
    quot = [g.exact_divide(f).monic() for g in inter.gb]
    return _from_gb(R, quot)


def colon(I: Ideal, J: Ideal) -> Ideal:
    R = _same_ring(I, J)
    if J.is_zero():
        raise ValueError("colon by the zero ideal")
    if J.is_unit():
        return I
    parts = []
    for g in J.minimal_generators():
        _budget.check()
        P = colon_elem(I, g)
        if not P.is_unit():
            parts.append(P)
    if not parts:
        return _unit(R)
    parts.sort(key=lambda P: len(P.gb))
    return reduce(intersect, parts)


def saturate(I: Ideal, J: Ideal) -> Ideal:
    _same_ring(I, J)
    if J.is_zero():
        raise ValueError("saturation by the zero ideal")
    cur = I
    while True:
        _budget.check()
        nxt = colon(cur, J)
        if nxt.issubset(cur):
            return cur
        cur = nxt


# -- elimination -------------------------------------------------------
def eliminate_polys(polys: Sequence[Polynomial], names: Sequence[str]) -> list[Polynomial]:
    """Elements free of ``names`` in a reduced GB of ``polys`` for a block
    order eliminating ``names``.  Works for non-homogeneous input."""
    polys = [f for f in polys if f]
    if not polys:
        return []
    R = polys[0].ring
    names = list(names)
    for v in names:
        if v not in R.index:
            raise ValueError(f"unknown variable {v!r}")
    if not names:
        return list(_gb_polys(R, polys))
    rest = [v for v in R.variables if v not in names]
    if not rest:
        S = PolyRing(names, R.field, MonomialOrder.grevlex())
    else:
        S = PolyRing(names + rest, R.field, MonomialOrder.block_order(len(names)),
                     [R.weights[R.index[v]] for v in names + rest])
    basis, _ = _buchberger(S, [S.convert(f)._t for f in polys])
    b = len(names)
    out = []
    for t in basis:
        if any(S.exps(max(t))[:b]):
            continue
        out.append(R.convert(Polynomial(S, t)))
    return out


def _gb_polys(R, polys):
    basis, _ = _buchberger(R, [f._t for f in polys])
    return [Polynomial(R, t) for t in basis]


def eliminate(I: Ideal, variables: Sequence[str] | int) -> Ideal:
    """``I`` intersected with the subring on the remaining variables
    (``variables`` may be a count of leading ring variables)."""
    R = I.ring
    if isinstance(variables, int):
        variables = R.variables[:variables]
    variables = list(variables)
    if not variables:
        return I
    out = eliminate_polys(list(I.generators), variables)
    return Ideal(R, minimalize(out))


# -- graded pieces -----------------------------------------------------
def monomials_of_degree(R: PolyRing, d: int) -> list[int]:
    """Keys of all degree-``d`` monomials (standard grading)."""
    if d < 0:
        return []
    n = R.nvars
    out = []
    for c in itertools.combinations_with_replacement(range(n), d):
        k = 0
        for i in c:
            k += R.var_keys[i]
        out.append(k)
    return out


def degree_part(I: Ideal, n: int) -> Ideal:
    """The degree-``n`` slice of ``I`` as a k-basis (reduced echelon form of
    all monomial multiples of GB elements)."""
    R = I.ring
    if n < 0 or I.is_zero():
        return Ideal(R)
    E = Echelon(R.field)
    for g in I.gb:
        d = g.total_degree()
        if d > n:
            continue
        for m in monomials_of_degree(R, n - d):
            E.add({k + m: c for k, c in g._t.items()})
    rows = E.reduced_rows()
    return Ideal(R, [Polynomial(R, r) for r in rows])


# -- complete intersections and unmixed parts --------------------------
def height(I: Ideal) -> int:
    if I.is_unit():
        return I.ring.nvars
    return I.ring.nvars - I.hilbert.dim


def _is_ci(gens: Sequence[Polynomial]) -> bool:
    I = Ideal(gens[0].ring, gens)
    return not I.is_unit() and height(I) == len(gens)


def find_complete_intersection(
    I: Ideal,
    degrees: Sequence[int] | None = None,
    *,
    seed: int = 0,
    attempts: int = 40,
    skip: int = 0,
) -> CompleteIntersectionWitness:
    """A verified complete intersection inside ``I`` of height ``ht(I)``.

    With ``degrees`` the witness has exactly those degrees.  Subsets of the
    minimal generators are tried first, then seeded random combinations of
    forms of ``I`` in the required degrees.  ``skip`` discards that many
    valid witnesses first, which is how a second, different witness is
    obtained.
    """
    R = I.ring
    if I.is_zero() or I.is_unit():
        raise NoCompleteIntersection("the zero and unit ideals contain no proper complete intersection")
    g = height(I)
    if degrees is not None:
        degrees = sorted(degrees)
        if len(degrees) != g:
            raise NoCompleteIntersection(f"height is {g}, but {len(degrees)} degrees were requested")
    gens = sorted(I.minimal_generators(), key=lambda f: (f.total_degree(), f.lead_key))
    found = 0
    for sub in itertools.combinations(gens, g):
        if degrees is not None and sorted(f.total_degree() for f in sub) != degrees:
            continue
        _budget.check()
        if _is_ci(sub):
            if found == skip:
                return CompleteIntersectionWitness(tuple(sub), True)
            found += 1
    target = degrees or [max(f.total_degree() for f in gens)] * g
    rng = random.Random(seed)
    parts = {d: degree_part(I, d).generators for d in set(target)}
    for d, basis in parts.items():
        if not basis:
            raise NoCompleteIntersection(f"the ideal has no forms of degree {d}")
    F = R.field
    for attempt in range(attempts):
        _budget.check()
        cand = []
        for d in target:
            basis = parts[d]
            # sparse combinations first, denser as attempts proceed
            size = min(len(basis), 2 + attempt)
            chosen = rng.sample(range(len(basis)), size)
            f = R.zero()
            for i in chosen:
                f = f + basis[i].scale(F.random_nonzero(rng))
            cand.append(f)
        if any(not f for f in cand):
            continue
        if _is_ci(cand):
            if found == skip:
                return CompleteIntersectionWitness(tuple(cand), True)
            found += 1
    raise NoCompleteIntersection(
        f"no complete intersection of degrees {target} found in {attempts} attempts"
    )


def unmixed_part(I: Ideal, C: CompleteIntersectionWitness | Ideal | None = None, *, seed: int = 0) -> Ideal:
    """Intersection of the primary components of minimal height,
    computed as ``C:(C:I)`` for a complete intersection ``C`` inside ``I``
    of the same height."""
    R = I.ring
    if I.is_unit():
        raise ValueError("the unit ideal has no unmixed part")
    if I.is_zero():
        raise ValueError("unmixed part needs height at least 1")
    if C is None:
        C = find_complete_intersection(I, seed=seed)
    CI = C.ideal() if isinstance(C, CompleteIntersectionWitness) else C
    g = height(I)
    if len(CI.generators) != g or height(CI) != g:
        raise ValueError("witness is not a complete intersection of the ideal's height")
    if not CI.issubset(I):
        raise ValueError("witness is not contained in the ideal")
    return colon(CI, colon(CI, I))
