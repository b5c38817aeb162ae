"""Exact multivariate polynomials over QQ or GF(p).

Monomials are packed into Python integers.  The packing has two parts:

* the high part holds one field per row of the monomial order's weight
  matrix, so that plain integer comparison of two keys is the monomial
  order;
* the low part holds the raw exponents, one field per variable, with a
  guard bit on top of each field, so that divisibility is a couple of bit
  operations.

Both parts are linear in the exponent vector, hence ``key(a*b) ==
key(a) + key(b)`` and ``key(a/b) == key(a) - key(b)`` whenever ``b | a``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "FieldSpec",
    "MonomialOrder",
    "Monomial",
    "PolyRing",
    "Polynomial",
    "ParseError",
    "RingMismatchError",
    "compare",
    "LT",
    "EQ",
    "GT",
]

LT, EQ, GT = -1, 0, 1

_BITS = 12
_FMASK = (1 << _BITS) - 1
MAX_EXPONENT = (1 << (_BITS - 1)) - 1


class RingMismatchError(ValueError):
    """Operands live in different rings."""


class ParseError(ValueError):
    """Malformed polynomial text; ``pos`` is the 0-based character offset."""

    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field: ``kind`` is ``"QQ"`` or ``"GF"``."""

    kind: str = "GF"
    modulus: int = 32003

    def __post_init__(self):
        if self.kind == "GF":
            if not (_is_prime(self.modulus) and self.modulus < 2**31):
                raise ValueError(f"modulus must be a prime < 2^31, got {self.modulus}")
        elif self.kind == "QQ":
            object.__setattr__(self, "modulus", 0)
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls("QQ", 0)

    @classmethod
    def prime(cls, p: int = 32003) -> "FieldSpec":
        return cls("GF", p)

    @classmethod
    def from_char(cls, char: int) -> "FieldSpec":
        return cls.rationals() if char == 0 else cls.prime(char)

    @property
    def char(self) -> int:
        return self.modulus

    def __call__(self, value):
        p = self.modulus
        if p:
            if isinstance(value, Fraction):
                return value.numerator * pow(value.denominator, -1, p) % p
            return int(value) % p
        return Fraction(value)

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        p = self.modulus
        return pow(a, -1, p) if p else 1 / a

    def random_nonzero(self, rng):
        if self.modulus:
            return rng.randrange(1, self.modulus)
        return Fraction(rng.choice([-1, 1]) * rng.randrange(1, 100))

    def signed(self, a) -> int | Fraction:
        """Symmetric representative used for display."""
        p = self.modulus
        if p and a > p // 2:
            return a - p
        return a

    def __str__(self):
        return "QQ" if not self.modulus else f"GF({self.modulus})"


@dataclass(frozen=True)
class MonomialOrder:
    """``grevlex``, ``lex`` or ``block`` (the first ``block`` variables are
    eliminated; each block is ordered by grevlex)."""

    kind: str = "grevlex"
    block: int = 0

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "block" and self.block < 1:
            raise ValueError("block order needs a positive split point")

    @classmethod
    def grevlex(cls):
        return cls("grevlex")

    @classmethod
    def lex(cls):
        return cls("lex")

    @classmethod
    def block_order(cls, b: int):
        return cls("block", b)

    def rows(self, n: int) -> list[list[int]]:
        """Nonnegative weight matrix whose lexicographic comparison of
        ``W @ e`` realizes the order."""
        if self.kind == "lex":
            return [[int(i == r) for i in range(n)] for r in range(n)]
        if self.kind == "grevlex":
            return _grevlex_rows(0, n, n)
        b = self.block
        if b > n:
            raise ValueError(f"block split {b} exceeds {n} variables")
        rows = _grevlex_rows(0, b, n)
        if b < n:
            rows += _grevlex_rows(b, n, n)
        return rows

    def sort_key(self, exps: Sequence[int]) -> tuple:
        return tuple(sum(w * e for w, e in zip(row, exps)) for row in self.rows(len(exps)))

    def __str__(self):
        return f"block({self.block})" if self.kind == "block" else self.kind


def _grevlex_rows(lo: int, hi: int, n: int) -> list[list[int]]:
    # row k = sum of the first (hi - lo - k) exponents of the block
    rows = []
    for k in range(hi - lo):
        row = [0] * n
        for i in range(lo, hi - k):
            row[i] = 1
        rows.append(row)
    return rows


@dataclass(frozen=True)
class Monomial:
    exponents: tuple[int, ...]

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def __mul__(self, other: "Monomial") -> "Monomial":
        if len(self.exponents) != len(other.exponents):
            raise ValueError("monomial length mismatch")
        return Monomial(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def divides(self, other: "Monomial") -> bool:
        return all(a <= b for a, b in zip(self.exponents, other.exponents))


def compare(a: Monomial, b: Monomial, order: MonomialOrder) -> int:
    """Return LT, EQ or GT."""
    if len(a.exponents) != len(b.exponents):
        raise ValueError("monomial length mismatch")
    ka, kb = order.sort_key(a.exponents), order.sort_key(b.exponents)
    return (ka > kb) - (ka < kb)


_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


class PolyRing:
    """Polynomial ring ``field[variables]`` with a monomial order.

    ``weights`` is the grading used by :meth:`Polynomial.total_degree` and
    homogeneity tests; it defaults to the standard grading.
    """

    def __init__(
        self,
        variables: Sequence[str] | str,
        field: FieldSpec | None = None,
        order: MonomialOrder | None = None,
        weights: Sequence[int] | None = None,
    ):
        if isinstance(variables, str):
            variables = [v for v in re.split(r"[\s,]+", variables) if v]
        variables = tuple(variables)
        if not variables:
            raise ValueError("a ring needs at least one variable")
        if len(set(variables)) != len(variables):
            raise ValueError("variable names must be distinct")
        for v in variables:
            if not _IDENT.fullmatch(v):
                raise ValueError(f"invalid variable name {v!r}")
        self.variables = variables
        self.field = field or FieldSpec()
        self.order = order or MonomialOrder()
        self.nvars = n = len(variables)
        self.weights = tuple(weights) if weights is not None else (1,) * n
        self.char = self.field.char
        self.index = {v: i for i, v in enumerate(variables)}

        rows = self.order.rows(n)
        nrows = len(rows)
        self.low_mask = (1 << (n * _BITS)) - 1
        self.guard = sum(1 << (i * _BITS + _BITS - 1) for i in range(n))
        self._shifts = [i * _BITS for i in range(n)]
        var_keys = []
        for i in range(n):
            k = 1 << (i * _BITS)
            for r, row in enumerate(rows):
                if row[i]:
                    k += row[i] << ((n + nrows - 1 - r) * _BITS)
            var_keys.append(k)
        self.var_keys = tuple(var_keys)

    # -- identity -----------------------------------------------------
    def _ident(self):
        return (self.variables, self.field, self.order, self.weights)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self._ident() == other._ident()

    def __hash__(self):
        return hash(self._ident())

    def __repr__(self):
        return f"PolyRing({','.join(self.variables)}; {self.field}; {self.order})"

    def with_field(self, field: FieldSpec) -> "PolyRing":
        return PolyRing(self.variables, field, self.order, self.weights)

    def with_order(self, order: MonomialOrder) -> "PolyRing":
        return PolyRing(self.variables, self.field, order, self.weights)

    # -- monomial keys ------------------------------------------------
    def encode(self, exps: Sequence[int]) -> int:
        if len(exps) != self.nvars:
            raise ValueError("exponent vector length mismatch")
        k = 0
        for e, vk in zip(exps, self.var_keys):
            if e:
                if e < 0 or e > MAX_EXPONENT:
                    raise OverflowError(f"exponent {e} out of range")
                k += e * vk
        return k

    def exps(self, key: int) -> tuple[int, ...]:
        return tuple((key >> s) & _FMASK for s in self._shifts)

    def key_degree(self, key: int) -> int:
        return sum(w * ((key >> s) & _FMASK) for w, s in zip(self.weights, self._shifts))

    def divides_key(self, a: int, b: int) -> bool:
        g = self.guard
        return (((b & self.low_mask) | g) - (a & self.low_mask)) & g == g

    def lcm_key(self, a: int, b: int) -> int:
        return self.encode([max(x, y) for x, y in zip(self.exps(a), self.exps(b))])

    def coprime_keys(self, a: int, b: int) -> bool:
        return not any(x and y for x, y in zip(self.exps(a), self.exps(b)))

    def check_overflow(self, key: int):
        if key & self.guard:
            raise OverflowError("exponent overflow in monomial arithmetic")

    # -- construction -------------------------------------------------
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = self.field(c)
        return Polynomial(self, {0: c} if c else {})

    def gen(self, name_or_index) -> "Polynomial":
        i = self.index[name_or_index] if isinstance(name_or_index, str) else name_or_index
        return Polynomial(self, {self.var_keys[i]: self.field(1)})

    def gens(self) -> tuple["Polynomial", ...]:
        return tuple(self.gen(i) for i in range(self.nvars))

    def monomial(self, exps: Sequence[int], coeff=1) -> "Polynomial":
        c = self.field(coeff)
        return Polynomial(self, {self.encode(exps): c} if c else {})

    def from_terms(self, terms: Iterable[tuple[object, Sequence[int]]]) -> "Polynomial":
        """Build from ``(coefficient, exponents)`` pairs; duplicates add up."""
        d: dict = {}
        F = self.field
        for c, e in terms:
            k = self.encode(e)
            d[k] = d.get(k, 0) + F(c)
        if self.char:
            p = self.char
            d = {k: v % p for k, v in d.items() if v % p}
        else:
            d = {k: v for k, v in d.items() if v}
        return Polynomial(self, d)

    def convert(self, f: "Polynomial") -> "Polynomial":
        """Map ``f`` into this ring by variable names (missing variables
        must not occur in ``f``)."""
        if f.ring == self:
            return f
        src = f.ring
        pos = []
        for v in src.variables:
            pos.append(self.index.get(v))
        d = {}
        F = self.field
        for k, c in f._t.items():
            e = src.exps(k)
            out = [0] * self.nvars
            for i, ei in enumerate(e):
                if ei:
                    if pos[i] is None:
                        raise ValueError(f"variable {src.variables[i]} not in target ring")
                    out[pos[i]] = ei
            if src.char == 0 and self.char:
                cc = F(c)
            else:
                cc = F(c) if self.char != src.char else c
            if cc:
                kk = self.encode(out)
                d[kk] = d.get(kk, 0) + cc
        if self.char:
            d = {k: v % self.char for k, v in d.items() if v % self.char}
        return Polynomial(self, d)

    # -- text ---------------------------------------------------------
    def parse(self, text: str) -> "Polynomial":
        return _Parser(self, text).parse()

    def __call__(self, text: str) -> "Polynomial":
        return self.parse(text)

    def format(self, f: "Polynomial") -> str:
        return f.format()


class Polynomial:
    """Immutable polynomial; terms are kept in a dict ``key -> coefficient``
    with no zero coefficients."""

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self._t = terms

    # -- inspection ---------------------------------------------------
    @property
    def terms(self) -> list[tuple[object, Monomial]]:
        """``(coefficient, Monomial)`` pairs, strictly descending."""
        R = self.ring
        return [(self._t[k], Monomial(R.exps(k))) for k in sorted(self._t, reverse=True)]

    def __len__(self):
        return len(self._t)

    def __bool__(self):
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    @property
    def lead_key(self) -> int:
        if not self._t:
            raise ValueError("zero polynomial has no leading term")
        return max(self._t)

    def leading_term(self) -> tuple[object, Monomial]:
        k = self.lead_key
        return self._t[k], Monomial(self.ring.exps(k))

    def leading_monomial(self) -> Monomial:
        return self.leading_term()[1]

    def leading_coefficient(self):
        return self._t[self.lead_key]

    def degrees(self) -> set[int]:
        kd = self.ring.key_degree
        return {kd(k) for k in self._t}

    def total_degree(self) -> int:
        """Maximal degree of a term; ``-1`` for the zero polynomial."""
        return max(self.degrees(), default=-1)

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def variables_used(self) -> set[str]:
        R = self.ring
        used = set()
        for k in self._t:
            for v, e in zip(R.variables, R.exps(k)):
                if e:
                    used.add(v)
        return used

    def coefficient(self, exps: Sequence[int]):
        return self._t.get(self.ring.encode(exps), 0)

    # -- arithmetic ---------------------------------------------------
    def _check(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError("polynomials belong to different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        d = dict(self._t)
        p = self.ring.char
        for k, c in other._t.items():
            v = d.get(k, 0) + c
            if p:
                v %= p
            if v:
                d[k] = v
            else:
                d.pop(k, None)
        return Polynomial(self.ring, d)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.char
        if p:
            return Polynomial(self.ring, {k: p - c for k, c in self._t.items()})
        return Polynomial(self.ring, {k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        R = self.ring
        p = R.char
        d: dict = {}
        a, b = (self._t, other._t) if len(self._t) <= len(other._t) else (other._t, self._t)
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = ka + kb
                d[k] = d.get(k, 0) + ca * cb
        if p:
            d = {k: v % p for k, v in d.items() if v % p}
        else:
            d = {k: v for k, v in d.items() if v}
        g = R.guard
        if any(k & g for k in d):
            raise OverflowError("exponent overflow in monomial arithmetic")
        return Polynomial(R, d)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
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
        R = self.ring
        c = R.field(c)
        if not c:
            return R.zero()
        p = R.char
        if p:
            return Polynomial(R, {k: v * c % p for k, v in self._t.items()})
        return Polynomial(R, {k: v * c for k, v in self._t.items()})

    def mul_key(self, key: int, c=1) -> "Polynomial":
        """Multiply by the monomial with packed key ``key`` (times ``c``)."""
        R = self.ring
        p = R.char
        if p:
            d = {k + key: v * c % p for k, v in self._t.items()}
        else:
            d = {k + key: v * c for k, v in self._t.items()}
        g = R.guard
        if any(k & g for k in d):
            raise OverflowError("exponent overflow in monomial arithmetic")
        return Polynomial(R, d)

    def monic(self) -> "Polynomial":
        if not self._t:
            return self
        return self.scale(self.ring.field.inv(self.leading_coefficient()))

    def exact_divide(self, g: "Polynomial") -> "Polynomial":
        """Quotient ``self / g``; raises if the division leaves a remainder."""
        g = self._check(g)
        if not g:
            raise ZeroDivisionError("division by the zero polynomial")
        R = self.ring
        p = R.char
        F = R.field
        gk = g.lead_key
        ginv = F.inv(g._t[gk])
        f = dict(self._t)
        q = {}
        while f:
            k = max(f)
            if not R.divides_key(gk, k):
                raise ValueError("polynomial is not divisible")
            c = f[k] * ginv
            if p:
                c %= p
            s = k - gk
            q[s] = c
            for kk, v in g._t.items():
                kk += s
                w = f.get(kk, 0) - c * v
                if p:
                    w %= p
                if w:
                    f[kk] = w
                else:
                    del f[kk]
        return Polynomial(R, q)

    def homogeneous_components(self) -> dict[int, "Polynomial"]:
        kd = self.ring.key_degree
        parts: dict[int, dict] = {}
        for k, c in self._t.items():
            parts.setdefault(kd(k), {})[k] = c
        return {d: Polynomial(self.ring, t) for d, t in parts.items()}

    # -- comparison ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self._t == other._t

    def __hash__(self):
        return hash((self.ring, frozenset(self._t.items())))

    # -- text ---------------------------------------------------------
    def format(self) -> str:
        if not self._t:
            return "0"
        R = self.ring
        F = R.field
        out = []
        for k in sorted(self._t, reverse=True):
            c = F.signed(self._t[k])
            neg = c < 0
            if neg:
                c = -c
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(R.variables, R.exps(k)) if e
            )
            if not mono:
                body = str(c)
            elif c == 1:
                body = mono
            else:
                body = f"{c}*{mono}"
            if out:
                out.append(("-" if neg else "+") + body)
            else:
                out.append(("-" if neg else "") + body)
        return "".join(out)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Polynomial({self.format()!r})"


class _Parser:
    """Recursive descent over ``expr := term (('+'|'-') term)*``,
    ``term := factor (('*'|'/') factor)*``, ``factor := ('+'|'-') factor |
    atom ('^' INT)?``, ``atom := INT | NAME | '(' expr ')'``."""

    _token = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")

    def __init__(self, ring: PolyRing, text: str):
        self.ring = ring
        self.text = text
        self.toks = []
        pos = 0
        n = len(text)
        while pos < n:
            m = self._token.match(text, pos)
            if not m or m.end() == pos:
                break
            if m.group(1) is not None:
                self.toks.append(("int", m.group(1), m.start(1)))
            elif m.group(2) is not None:
                self.toks.append(("name", m.group(2), m.start(2)))
            elif m.group(3) is not None:
                self.toks.append(("op", m.group(3), m.start(3)))
            pos = m.end()
        self.i = 0

    def _peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("end", "", len(self.text))

    def _next(self):
        t = self._peek()
        self.i += 1
        return t

    def _error(self, msg, tok=None):
        tok = tok or self._peek()
        raise ParseError(msg, tok[2], self.text)

    def parse(self) -> Polynomial:
        if not self.toks:
            self._error("empty polynomial")
        f = self._expr()
        if self._peek()[0] != "end":
            self._error(f"unexpected {self._peek()[1]!r}")
        return f

    def _expr(self):
        f = self._term()
        while self._peek()[:2] in (("op", "+"), ("op", "-")):
            op = self._next()[1]
            g = self._term()
            f = f + g if op == "+" else f - g
        return f

    def _term(self):
        f = self._factor()
        while self._peek()[:2] in (("op", "*"), ("op", "/")):
            op = self._next()
            g = self._factor()
            if op[1] == "*":
                f = f * g
            else:
                if not g.is_constant() or not g:
                    self._error("division only by nonzero constants", op)
                f = f.scale(self.ring.field.inv(g._t[0]))
        return f

    def _factor(self):
        t = self._peek()
        if t[:2] == ("op", "-"):
            self._next()
            return -self._factor()
        if t[:2] == ("op", "+"):
            self._next()
            return self._factor()
        base = self._atom()
        if self._peek()[:2] == ("op", "^"):
            self._next()
            e = self._next()
            if e[0] != "int":
                self._error("expected integer exponent", e)
            base = base ** int(e[1])
        return base

    def _atom(self):
        t = self._next()
        R = self.ring
        if t[0] == "int":
            return R.const(int(t[1]))
        if t[0] == "name":
            if t[1] not in R.index:
                raise ParseError(f"unknown variable {t[1]!r}", t[2], self.text)
            return R.gen(t[1])
        if t[:2] == ("op", "("):
            f = self._expr()
            if self._next()[:2] != ("op", ")"):
                self._error("expected ')'", self.toks[self.i - 1] if self.i <= len(self.toks) else None)
            return f
        raise ParseError(f"unexpected {t[1] or 'end of input'!r}", t[2], self.text)
