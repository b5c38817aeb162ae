"""Hilbert series of monomial ideals.

For a monomial ideal ``M`` in ``n`` variables the Hilbert series of
``R/M`` is ``N(t) / (1-t)^n``.  The numerator is computed by the pivot
recursion ``N(M) = N(M + (p)) + t^deg(p) * N(M : p)`` for a monomial
``p``, with the pivot chosen as a power of the most frequent variable.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Iterable, Sequence

__all__ = ["HilbertSeries", "monomial_numerator", "default_pivot", "minimal_monomials", "poly_mul", "poly_div_one_minus_t"]

Exps = tuple[int, ...]


def poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def poly_add(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += x
    return _trim(out)


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_div_one_minus_t(a: Sequence[int]) -> list[int]:
    """Exact quotient ``a(t) / (1 - t)``; requires ``a(1) == 0``."""
    if sum(a) != 0:
        raise ValueError("polynomial is not divisible by 1 - t")
    # a = (1 - t) q  =>  q_k = a_0 + ... + a_k
    out, acc = [], 0
    for x in a[:-1]:
        acc += x
        out.append(acc)
    return _trim(out)


def minimal_monomials(gens: Iterable[Exps]) -> list[Exps]:
    """Minimal generators of the monomial ideal spanned by ``gens``."""
    gens = sorted(set(gens), key=lambda e: (sum(e), e))
    out: list[Exps] = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return out


def monomial_numerator(gens: Iterable[Exps], nvars: int, pivot=None) -> list[int]:
    """Numerator ``N(t)`` (coefficients, lowest degree first) of the Hilbert
    series of ``R/M``; the zero ideal gives ``[1]`` and the unit ideal ``[]``.

    ``pivot(gens, nvars) -> (variable, exponent)`` overrides the splitting
    rule; it must return a variable occurring in at least two generators
    and one of its positive exponents.  The result does not depend on it.
    """
    return _numerator(minimal_monomials(gens), nvars, pivot or default_pivot)


def default_pivot(gens: list[Exps], n: int) -> tuple[int, int]:
    """The most frequent variable, raised to its median positive exponent."""
    counts = [0] * n
    for g in gens:
        for i, e in enumerate(g):
            if e:
                counts[i] += 1
    v = max(range(n), key=lambda i: counts[i])
    es = sorted(g[v] for g in gens if g[v])
    return v, es[(len(es) - 1) // 2]


def _numerator(gens: list[Exps], n: int, pivot=default_pivot) -> list[int]:
    if not gens:
        return [1]
    if any(sum(g) == 0 for g in gens):
        return []
    # pairwise coprime generators: product of (1 - t^deg)
    used = [0] * n
    coprime = True
    for g in gens:
        for i, e in enumerate(g):
            if e:
                if used[i]:
                    coprime = False
                    break
                used[i] = 1
        if not coprime:
            break
    if coprime:
        out = [1]
        for g in gens:
            d = sum(g)
            factor = [1] + [0] * (d - 1) + [-1]
            out = poly_mul(out, factor)
        return out
    # N(M) = N(M + (p)) + t^e N(M : p) for the pivot p = x_v^e
    v, e = pivot(gens, n)
    p = tuple(e if i == v else 0 for i in range(n))
    plus = minimal_monomials([g for g in gens if g[v] < e] + [p])
    quot = minimal_monomials([g[:v] + (max(0, g[v] - e),) + g[v + 1 :] for g in gens])
    a = _numerator(plus, n, pivot)
    b = _numerator(quot, n, pivot)
    return poly_add(a, [0] * e + b)


@dataclass(frozen=True)
class HilbertSeries:
    """``numerator(t) / (1-t)^nvars``; ``numerator`` lists coefficients from
    degree 0 upwards.  An empty numerator is the unit ideal."""

    numerator: tuple[int, ...]
    nvars: int

    @classmethod
    def of_monomials(cls, gens: Iterable[Exps], nvars: int) -> "HilbertSeries":
        return cls(tuple(monomial_numerator(gens, nvars)), nvars)

    @cached_property
    def _reduced(self) -> tuple[tuple[int, ...], int]:
        if not self.numerator:
            return (), -1
        q = list(self.numerator)
        d = self.nvars
        while d > 0 and sum(q) == 0:
            q = poly_div_one_minus_t(q)
            d -= 1
        return tuple(q), d

    @property
    def reduced_numerator(self) -> tuple[int, ...]:
        """``Q(t)`` with ``N(t)/(1-t)^n = Q(t)/(1-t)^dim`` and ``Q(1) != 0``."""
        return self._reduced[0]

    @property
    def dim(self) -> int:
        """Krull dimension of the quotient; ``-1`` for the unit ideal."""
        return self._reduced[1]

    @property
    def multiplicity(self) -> int:
        if not self.numerator:
            raise ValueError("the unit ideal has no multiplicity")
        return sum(self._reduced[0])

    def __call__(self, n: int) -> int:
        """Hilbert function value ``dim_k (R/I)_n``."""
        if n < 0:
            return 0
        m = self.nvars
        return sum(c * comb(n - i + m - 1, m - 1) for i, c in enumerate(self.numerator) if i <= n)

    def values(self, upto: int) -> list[int]:
        return [self(i) for i in range(upto + 1)]

    def format(self) -> str:
        terms = []
        for i, c in enumerate(self.numerator):
            if not c:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            terms.append(body if not terms and c > 0 else (sign + body if terms else "-" + body))
        num = "".join(terms) or "0"
        return f"({num})/(1-t)^{self.nvars}"
