"""Claim files: declarative ideal computations with checkable assertions.

A claim file looks like::

    # comment
    ring char=32003 vars=[x,y,a,b,c] order=grevlex

    claim intro-pd5 "three cubics with pd 5"
    let I = ideal(x^3, y^3, x^2*a+x*y*b+y^2*c)
    assert pd(I) == 5
    assert x^2*y^2 in colon(I, ideal(x,y,a,b,c))
    assert x^2*y^2 not in I

A ``ring`` line inside a claim applies to that claim only.  Expressions
are built from bound names and the functions in :data:`FUNCTIONS`.  The
assertion forms are

* ``assert pd(E) == N`` / ``<=`` and more generally integer comparisons
  ``A op B`` where ``A``, ``B`` are sums/differences/products of integers
  and the invariants ``pd ht dim depth mult ngens hf(E, n)``;
* ``assert E == F`` and ``assert E != F`` (ideal equality);
* ``assert P in E`` / ``assert P not in E`` for a polynomial ``P``, and
  ``assert F in E`` for an ideal ``F`` (containment);
* ``assert hilbert(E) == hilbert(F)``;
* ``assert cm(E)`` / ``assert not cm(E)``.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from typing import Any, Callable

from . import ideals as _id
from .ideals import Ideal
from .invariants import betti, depth, dim, euler_check, height, hilbert_numerator, is_cm, multiplicity, pd
from .linkage import link as _link
from .polyring import FieldSpec, MonomialOrder, ParseError, PolyRing, Polynomial

__all__ = [
    "ClaimParseError",
    "ClaimFile",
    "Claim",
    "Assertion",
    "AssertionResult",
    "ClaimResult",
    "Report",
    "parse_claims",
    "parse_ring_line",
    "format_ring",
    "ideal_file_parse",
    "eval_expr",
    "run_claim",
    "run_all",
    "FUNCTIONS",
]


class ClaimParseError(ValueError):
    def __init__(self, message: str, line: int, col: int = 1):
        self.line, self.col = line, col
        super().__init__(f"line {line}, column {col}: {message}")


# -- expression trees ----------------------------------------------------
@dataclass(frozen=True)
class Node:
    kind: str  # "call" | "name" | "poly" | "int"
    value: Any
    args: tuple = ()
    text: str = ""

    def __str__(self):
        return self.text

    def format(self) -> str:
        """Canonical text: polynomials normalized, single spaces."""
        if self.kind == "poly":
            return self.value.format()
        if self.kind in ("name", "var", "int"):
            return str(self.value)
        if self.kind == "arith":
            a, b = self.args
            return f"{a.format()} {self.value} {b.format()}"
        return f"{self.value}({', '.join(a.format() for a in self.args)})"


FUNCTIONS: dict[str, tuple[int, int | None]] = {
    # name: (min args, max args)
    "ideal": (0, None),
    "sum": (1, None),
    "product": (2, None),
    "power": (2, 2),
    "intersect": (1, None),
    "colon": (2, 2),
    "saturate": (2, 2),
    "eliminate": (1, None),
    "degree_part": (2, 2),
    "link": (2, 2),
    "unmixed": (1, 2),
}

_INVARIANTS = {"pd", "ht", "dim", "depth", "mult", "ngens", "hf"}


@dataclass
class Assertion:
    kind: str
    operands: tuple
    text: str
    line: int


    def format(self) -> str:
        k, ops = self.kind, self.operands
        if k in ("is_cm", "not_cm"):
            return ("" if k == "is_cm" else "not ") + f"cm({ops[0].format()})"
        if k == "hilbert_eq":
            return f"hilbert({ops[0].format()}) == hilbert({ops[1].format()})"
        if k in ("ideal_eq", "ideal_ne"):
            return f"{ops[0].format()} {'==' if k == 'ideal_eq' else '!='} {ops[1].format()}"
        if k == "subset":
            return f"{ops[0].format()} in {ops[1].format()}"
        if k in ("member", "not_member"):
            return f"{ops[0].format()} {'in' if k == 'member' else 'not in'} {ops[1].format()}"
        lhs, op, rhs = ops
        return f"{lhs.format()} {op} {rhs.format()}"


@dataclass
class Claim:
    id: str
    locus: str
    ring: PolyRing
    bindings: list = field(default_factory=list)  # (name, Node)
    assertions: list = field(default_factory=list)
    line: int = 0


@dataclass
class ClaimFile:
    ring: PolyRing | None
    claims: list

    def format(self) -> str:
        """Canonical claim-file text; parsing it gives back the same claims."""
        out = []
        if self.ring is not None:
            out.append(format_ring(self.ring))
        for c in self.claims:
            out.append("")
            out.append(f'claim {c.id} "{c.locus}"' if c.locus else f"claim {c.id}")
            if c.ring is not self.ring:
                out.append(format_ring(c.ring))
            for name, node in c.bindings:
                out.append(f"let {name} = {node.format()}")
            for a in c.assertions:
                out.append(f"assert {a.format()}")
        return "\n".join(out) + "\n"

    def get(self, cid: str) -> Claim:
        for c in self.claims:
            if c.id == cid:
                return c
        raise KeyError(cid)


# -- parsing -------------------------------------------------------------
_RING_RE = re.compile(r"ring\s+(.*)$")


def format_ring(R: PolyRing) -> str:
    return f"ring char={R.char} vars=[{','.join(R.variables)}] order=grevlex"


def parse_ring_line(body: str, line: int = 1, char_override: int | None = None) -> PolyRing:
    """Parse ``char=<p> vars=[...] order=<name>`` (order defaults to grevlex)."""
    opts = {}
    for m in re.finditer(r"(\w+)\s*=\s*(\[[^\]]*\]|\S+)", body):
        opts[m.group(1)] = (m.group(2), m.start(1) + 1)
    rest = re.sub(r"(\w+)\s*=\s*(\[[^\]]*\]|\S+)", "", body).strip()
    if rest:
        raise ClaimParseError(f"unexpected text in ring declaration: {rest!r}", line)
    for k in opts:
        if k not in ("char", "vars", "order"):
            raise ClaimParseError(f"unknown ring option {k!r}", line, opts[k][1])
    if "vars" not in opts:
        raise ClaimParseError("ring declaration needs vars=[...]", line)
    v = opts["vars"][0]
    if not (v.startswith("[") and v.endswith("]")):
        raise ClaimParseError("vars must be a bracketed list", line, opts["vars"][1])
    names = [s.strip() for s in v[1:-1].split(",") if s.strip()]
    try:
        char = int(opts.get("char", ("32003", 0))[0])
    except ValueError:
        raise ClaimParseError("char must be an integer", line, opts["char"][1]) from None
    if char_override is not None:
        char = char_override
    order = opts.get("order", ("grevlex", 0))[0]
    if order != "grevlex":
        raise ClaimParseError(f"unsupported order {order!r} (claims use grevlex)", line)
    try:
        return PolyRing(names, FieldSpec.from_char(char), MonomialOrder.grevlex())
    except ValueError as exc:
        raise ClaimParseError(str(exc), line) from None


class _ExprParser:
    """Recursive descent over one line.  Polynomial arguments are handed to
    the ring's polynomial parser."""

    def __init__(self, text: str, line: int, offset: int, ring: PolyRing, bound: set):
        self.s = text
        self.line = line
        self.offset = offset  # column of text[0], 1-based
        self.ring = ring
        self.bound = bound
        self.i = 0

    def err(self, msg, at=None):
        raise ClaimParseError(msg, self.line, self.offset + (self.i if at is None else at))

    def ws(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1

    def peek_ident(self):
        m = re.compile(r"[A-Za-z_][A-Za-z_0-9]*").match(self.s, self.i)
        return m.group(0) if m else None

    def at_end(self):
        self.ws()
        return self.i >= len(self.s)

    def _poly_span(self, stops: str) -> tuple[int, int]:
        """Extent of a polynomial argument: up to a top-level char in ``stops``."""
        start = self.i
        depth = 0
        while self.i < len(self.s):
            ch = self.s[self.i]
            if ch == "(":
                depth += 1
            elif ch == ")":
                if depth == 0:
                    break
                depth -= 1
            elif depth == 0 and ch in stops:
                break
            self.i += 1
        return start, self.i

    def poly_at(self, start: int, end: int) -> Node:
        text = self.s[start:end].strip()
        lead = len(self.s[start:end]) - len(self.s[start:end].lstrip())
        if not text:
            self.err("expected a polynomial", start)
        try:
            f = self.ring.parse(text)
        except ParseError as exc:
            raise ClaimParseError(str(exc).rsplit(" at position", 1)[0], self.line,
                                  self.offset + start + lead + exc.pos) from None
        return Node("poly", f, (), text)

    def is_ideal_start(self) -> bool:
        self.ws()
        name = self.peek_ident()
        if name is None:
            return False
        j = self.i + len(name)
        while j < len(self.s) and self.s[j].isspace():
            j += 1
        if name in FUNCTIONS and j < len(self.s) and self.s[j] == "(":
            return True
        return name in self.bound

    def ideal(self) -> Node:
        """An ideal-valued expression: a bound name or a function call."""
        self.ws()
        start = self.i
        name = self.peek_ident()
        if name is None:
            self.err("expected an ideal expression")
        self.i += len(name)
        self.ws()
        if self.i < len(self.s) and self.s[self.i] == "(" and name in FUNCTIONS:
            return self.call(name, start)
        if self.i < len(self.s) and self.s[self.i] == "(":
            self.err(f"unknown function {name!r}", start)
        if name not in self.bound:
            if name in self.ring.index:
                self.err(f"expected an ideal, found the variable {name!r}", start)
            self.err(f"unbound name {name!r}", start)
        return Node("name", name, (), name)

    def call(self, name: str, start: int) -> Node:
        self.i += 1  # "("
        args = []
        self.ws()
        if self.i < len(self.s) and self.s[self.i] == ")":
            self.i += 1
        else:
            while True:
                args.append(self.argument(name, len(args)))
                self.ws()
                if self.i >= len(self.s):
                    self.err("missing ')'")
                ch = self.s[self.i]
                self.i += 1
                if ch == ")":
                    break
                if ch != ",":
                    self.err(f"expected ',' or ')', found {ch!r}", self.i - 1)
        lo, hi = FUNCTIONS[name]
        if len(args) < lo or (hi is not None and len(args) > hi):
            self.err(f"{name} takes {lo}{'' if hi == lo else '+' if hi is None else f'-{hi}'} arguments, got {len(args)}", start)
        return Node("call", name, tuple(args), self.s[start:self.i].strip())

    def argument(self, fname: str, index: int) -> Node:
        self.ws()
        if fname == "ideal" or (fname == "colon" and index == 1 and not self.is_ideal_start()):
            s, e = self._poly_span(",")
            return self.poly_at(s, e)
        if (fname in ("power", "degree_part") and index == 1):
            m = re.compile(r"\d+").match(self.s, self.i)
            if not m:
                self.err("expected an integer")
            self.i = m.end()
            return Node("int", int(m.group(0)), (), m.group(0))
        if fname == "eliminate" and index >= 1:
            name = self.peek_ident()
            if name is None or name not in self.ring.index:
                self.err("eliminate expects ring variables after the ideal")
            self.i += len(name)
            return Node("var", name, (), name)
        return self.ideal()


def _int_expr(p: _ExprParser) -> Node:
    """``term (('+'|'-') term)*`` over integers and invariants."""
    node = _int_term(p)
    while True:
        p.ws()
        if p.i < len(p.s) and p.s[p.i] in "+-":
            op = p.s[p.i]
            p.i += 1
            rhs = _int_term(p)
            node = Node("arith", op, (node, rhs), f"{node.text} {op} {rhs.text}")
        else:
            return node


def _int_term(p: _ExprParser) -> Node:
    node = _int_atom(p)
    while True:
        p.ws()
        if p.i < len(p.s) and p.s[p.i] == "*":
            p.i += 1
            rhs = _int_atom(p)
            node = Node("arith", "*", (node, rhs), f"{node.text} * {rhs.text}")
        else:
            return node


def _int_atom(p: _ExprParser) -> Node:
    p.ws()
    m = re.compile(r"-?\d+").match(p.s, p.i)
    if m:
        p.i = m.end()
        return Node("int", int(m.group(0)), (), m.group(0))
    start = p.i
    name = p.peek_ident()
    if name not in _INVARIANTS:
        p.err("expected an integer or an invariant (pd, ht, dim, depth, mult, ngens, hf)")
    p.i += len(name)
    p.ws()
    if p.i >= len(p.s) or p.s[p.i] != "(":
        p.err("expected '('")
    p.i += 1
    arg = p.ideal()
    args = [arg]
    p.ws()
    if name == "hf":
        if p.i >= len(p.s) or p.s[p.i] != ",":
            p.err("hf takes an ideal and a degree")
        p.i += 1
        p.ws()
        m = re.compile(r"\d+").match(p.s, p.i)
        if not m:
            p.err("expected a degree")
        p.i = m.end()
        args.append(Node("int", int(m.group(0)), (), m.group(0)))
        p.ws()
    if p.i >= len(p.s) or p.s[p.i] != ")":
        p.err("expected ')'")
    p.i += 1
    return Node("inv", name, tuple(args), p.s[start:p.i])


_CMP = ("==", "<=", ">=", "!=", "<", ">")


def _parse_assert(body: str, line: int, col: int, ring: PolyRing, bound: set) -> Assertion:
    p = _ExprParser(body, line, col, ring, bound)
    text = body.strip()
    p.ws()
    if body.startswith("not ", p.i) and body[p.i + 4:].lstrip().startswith("cm("):
        p.i += 4
        p.ws()
        p.i += 3
        e = p.ideal()
        p.ws()
        if p.i >= len(p.s) or p.s[p.i] != ")":
            p.err("expected ')'")
        p.i += 1
        if not p.at_end():
            p.err("unexpected text after assertion")
        return Assertion("not_cm", (e,), text, line)
    if body.startswith("cm(", p.i):
        p.i += 3
        e = p.ideal()
        p.ws()
        if p.i >= len(p.s) or p.s[p.i] != ")":
            p.err("expected ')'")
        p.i += 1
        if not p.at_end():
            p.err("unexpected text after assertion")
        return Assertion("is_cm", (e,), text, line)
    if body.startswith("hilbert(", p.i):
        p.i += 8
        a = p.ideal()
        p.ws()
        if not body.startswith(")", p.i):
            p.err("expected ')'")
        p.i += 1
        p.ws()
        if not body.startswith("==", p.i):
            p.err("expected '=='")
        p.i += 2
        p.ws()
        if not body.startswith("hilbert(", p.i):
            p.err("expected hilbert(...)")
        p.i += 8
        b = p.ideal()
        p.ws()
        if not body.startswith(")", p.i):
            p.err("expected ')'")
        p.i += 1
        if not p.at_end():
            p.err("unexpected text after assertion")
        return Assertion("hilbert_eq", (a, b), text, line)
    name = p.peek_ident()
    if name in _INVARIANTS or re.match(r"-?\d", body[p.i:] or " "):
        lhs = _int_expr(p)
        p.ws()
        op = next((o for o in _CMP if body.startswith(o, p.i)), None)
        if op is None:
            p.err("expected a comparison operator")
        p.i += len(op)
        rhs = _int_expr(p)
        if not p.at_end():
            p.err("unexpected text after assertion")
        kind = {"==": "int_eq", "<=": "int_le"}.get(op, "int_cmp")
        if kind != "int_cmp" and lhs.kind == "inv" and lhs.value == "pd" and rhs.kind == "int":
            kind = "pd_eq" if op == "==" else "pd_le"
        elif op == "==" and lhs.kind == "inv" and rhs.kind == "int" and lhs.value in ("mult", "ht"):
            kind = lhs.value + "_eq"
        return Assertion(kind, (lhs, op, rhs), text, line)
    if p.is_ideal_start():
        lhs = p.ideal()
        p.ws()
        if body.startswith("==", p.i) or body.startswith("!=", p.i):
            op = body[p.i:p.i + 2]
            p.i += 2
            rhs = p.ideal()
            if not p.at_end():
                p.err("unexpected text after assertion")
            return Assertion("ideal_eq" if op == "==" else "ideal_ne", (lhs, rhs), text, line)
        if re.match(r"in\s", body[p.i:]):
            p.i += 2
            rhs = p.ideal()
            if not p.at_end():
                p.err("unexpected text after assertion")
            return Assertion("subset", (lhs, rhs), text, line)
        p.err("expected '==', '!=' or 'in' after an ideal")
    # polynomial membership
    m = re.search(r"\s(not\s+in|in)\s", body)
    if not m:
        p.err("expected '<poly> in <ideal>' or another assertion form")
    poly = p.poly_at(p.i, m.start())
    p.i = m.end()
    rhs = p.ideal()
    if not p.at_end():
        p.err("unexpected text after assertion")
    kind = "not_member" if m.group(1).startswith("not") else "member"
    return Assertion(kind, (poly, rhs), text, line)


def parse_claims(text: str, *, char: int | None = None) -> ClaimFile:
    """Parse a claim file; ``char`` overrides every ring's characteristic
    (0 for the rationals)."""
    file_ring = None
    claims: list[Claim] = []
    cur: Claim | None = None
    bound: set = set()
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.lstrip()
        if not stripped:
            continue
        col = len(line) - len(stripped) + 1
        word = stripped.split(None, 1)[0]
        rest = stripped[len(word):]
        rest_col = col + len(word)
        if word == "ring":
            R = parse_ring_line(rest, ln, char)
            if cur is None:
                file_ring = R
            else:
                if cur.bindings or cur.assertions:
                    raise ClaimParseError("a claim's ring must precede its bindings", ln, col)
                cur.ring = R
        elif word == "claim":
            m = re.match(r"\s+([A-Za-z0-9_.;-]+)\s*(?:\"([^\"]*)\")?\s*$", rest)
            if not m:
                raise ClaimParseError('expected: claim ID "description"', ln, rest_col)
            cid = m.group(1)
            if any(c.id == cid for c in claims):
                raise ClaimParseError(f"duplicate claim id {cid!r}", ln, rest_col)
            if file_ring is None:
                # a ring line may still follow inside the claim
                pass
            cur = Claim(cid, m.group(2) or "", file_ring, line=ln)
            claims.append(cur)
            bound = set()
        elif word in ("let", "assert"):
            if cur is None:
                raise ClaimParseError(f"'{word}' outside of a claim", ln, col)
            if cur.ring is None:
                raise ClaimParseError("missing ring declaration", ln, col)
            if word == "let":
                m = re.match(r"\s+([A-Za-z_][A-Za-z_0-9]*)\s*=", rest)
                if not m:
                    raise ClaimParseError("expected: let NAME = expression", ln, rest_col)
                name = m.group(1)
                if name in bound:
                    raise ClaimParseError(f"duplicate binding {name!r}", ln, rest_col + m.start(1))
                if name in cur.ring.index:
                    raise ClaimParseError(f"binding {name!r} shadows a ring variable", ln, rest_col + m.start(1))
                if name in FUNCTIONS or name in _INVARIANTS:
                    raise ClaimParseError(f"binding {name!r} shadows a function", ln, rest_col + m.start(1))
                body = rest[m.end():]
                p = _ExprParser(body, ln, rest_col + m.end(), cur.ring, bound)
                node = p.ideal()
                if not p.at_end():
                    p.err("unexpected text after expression")
                cur.bindings.append((name, node))
                bound.add(name)
            else:
                cur.assertions.append(_parse_assert(rest, ln, rest_col, cur.ring, bound))
        else:
            raise ClaimParseError(f"unknown statement {word!r}", ln, col)
    for c in claims:
        if c.ring is None:
            raise ClaimParseError("missing ring declaration", c.line)
    return ClaimFile(file_ring, claims)


def ideal_file_parse(text: str, *, char: int | None = None) -> tuple[PolyRing, dict]:
    """Parse a ring line followed by ``let`` bindings (the claim grammar
    without claims or assertions); returns the ring and the evaluated
    ideals by name, in binding order."""
    ring = None
    bindings: list = []
    bound: set = set()
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.lstrip()
        if not stripped:
            continue
        col = len(line) - len(stripped) + 1
        word = stripped.split(None, 1)[0]
        rest = stripped[len(word):]
        rest_col = col + len(word)
        if word == "ring":
            if ring is not None:
                raise ClaimParseError("duplicate ring declaration", ln, col)
            ring = parse_ring_line(rest, ln, char)
        elif word == "let":
            if ring is None:
                raise ClaimParseError("missing ring declaration", ln, col)
            m = re.match(r"\s+([A-Za-z_][A-Za-z_0-9]*)\s*=", rest)
            if not m:
                raise ClaimParseError("expected: let NAME = expression", ln, rest_col)
            name = m.group(1)
            if name in bound:
                raise ClaimParseError(f"duplicate binding {name!r}", ln, rest_col + m.start(1))
            if name in ring.index or name in FUNCTIONS or name in _INVARIANTS:
                raise ClaimParseError(f"binding {name!r} shadows a variable or function", ln, rest_col + m.start(1))
            p = _ExprParser(rest[m.end():], ln, rest_col + m.end(), ring, bound)
            node = p.ideal()
            if not p.at_end():
                p.err("unexpected text after expression")
            bindings.append((name, node))
            bound.add(name)
        else:
            raise ClaimParseError(f"unexpected statement {word!r} in an ideal file", ln, col)
    if ring is None:
        raise ClaimParseError("missing ring declaration", 1)
    env: dict = {}
    cache: dict = {}
    for name, node in bindings:
        env[name] = eval_expr(node, env, ring, cache)
    return ring, env


# -- evaluation ----------------------------------------------------------
class EvalError(RuntimeError):
    def __init__(self, path: str, cause: Exception):
        self.path = path
        self.cause = cause
        super().__init__(f"in {path}: {cause}")


def eval_expr(node: Node, env: dict, ring: PolyRing, cache: dict | None = None) -> Ideal:
    """Evaluate an ideal-valued expression; ``env`` maps names to ideals."""
    if cache is None:
        cache = {}
    if node.kind == "name":
        return env[node.value]
    if node.kind != "call":
        raise TypeError(f"not an ideal expression: {node.text}")
    if node.text in cache:
        return cache[node.text]
    name, args = node.value, node.args

    def ev(a):
        return eval_expr(a, env, ring, cache)

    try:
        if name == "ideal":
            out = Ideal(ring, [a.value for a in args])
        elif name == "sum":
            out = _id.ideal_sum(*[ev(a) for a in args])
        elif name == "product":
            out = ev(args[0])
            for a in args[1:]:
                out = _id.product(out, ev(a))
        elif name == "power":
            out = _id.power(ev(args[0]), args[1].value)
        elif name == "intersect":
            parts = [ev(a) for a in args]
            out = parts[0]
            for q in parts[1:]:
                out = _id.intersect(out, q)
        elif name == "colon":
            I = ev(args[0])
            if args[1].kind == "poly":
                out = _id.colon_elem(I, args[1].value)
            else:
                out = _id.colon(I, ev(args[1]))
        elif name == "saturate":
            out = _id.saturate(ev(args[0]), ev(args[1]))
        elif name == "eliminate":
            out = _id.eliminate(ev(args[0]), [a.value for a in args[1:]])
        elif name == "degree_part":
            out = _id.degree_part(ev(args[0]), args[1].value)
        elif name == "link":
            out = _link(ev(args[0]), ev(args[1])).link
        elif name == "unmixed":
            C = ev(args[1]) if len(args) > 1 else None
            out = _id.unmixed_part(ev(args[0]), C)
        else:  # pragma: no cover - rejected by the parser
            raise ValueError(f"unknown function {name}")
    except EvalError:
        raise
    except Exception as exc:
        raise EvalError(node.text, exc) from exc
    cache[node.text] = out
    return out


@dataclass
class AssertionResult:
    index: int
    text: str
    passed: bool
    witness: str
    line: int = 0


@dataclass
class ClaimResult:
    claim_id: str
    locus: str
    results: list
    elapsed: float
    touched: list = field(default_factory=list)  # ideals whose pd was computed

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


def _invariant(name: str, I: Ideal, extra=None) -> int:
    if name == "pd":
        return pd(I)
    if name == "ht":
        return height(I)
    if name == "dim":
        return dim(I)
    if name == "depth":
        return depth(I)
    if name == "mult":
        return multiplicity(I)
    if name == "ngens":
        return len(I.minimal_generators())
    if name == "hf":
        return I.hilbert(extra)
    raise ValueError(name)


def _eval_int(node: Node, ev: Callable, touched: list) -> int:
    if node.kind == "int":
        return node.value
    if node.kind == "arith":
        a, b = (_eval_int(x, ev, touched) for x in node.args)
        return a + b if node.value == "+" else a - b if node.value == "-" else a * b
    I = ev(node.args[0])
    if node.value in ("pd", "depth"):
        touched.append(I)
    return _invariant(node.value, I, node.args[1].value if len(node.args) > 1 else None)


def _compare(a: int, op: str, b: int) -> bool:
    return {"==": a == b, "<=": a <= b, ">=": a >= b, "!=": a != b, "<": a < b, ">": a > b}[op]


def _difference(A: Ideal, B: Ideal) -> str:
    extra = [g.format() for g in A.minimal_generators() if not B.contains(g)]
    missing = [g.format() for g in B.minimal_generators() if not A.contains(g)]
    parts = []
    if extra:
        parts.append("left side has " + ", ".join(extra[:4]) + (" ..." if len(extra) > 4 else "") + " not on the right")
    if missing:
        parts.append("right side has " + ", ".join(missing[:4]) + (" ..." if len(missing) > 4 else "") + " not on the left")
    return "; ".join(parts)


def _check(a: Assertion, ev: Callable, touched: list) -> tuple[bool, str]:
    k = a.kind
    if k in ("pd_eq", "pd_le", "int_eq", "int_le", "int_cmp", "mult_eq", "ht_eq"):
        lhs, op, rhs = a.operands
        x = _eval_int(lhs, ev, touched)
        y = _eval_int(rhs, ev, touched)
        ok = _compare(x, op, y)
        if lhs.kind == "inv" and rhs.kind == "int":
            what = {"pd": "pd(R/I)", "mult": "e(R/I)", "ht": "ht(I)", "dim": "dim(R/I)", "depth": "depth(R/I)"}.get(lhs.value, lhs.value)
            return ok, f"computed {what} = {x}"
        return ok, f"computed {lhs.text} = {x}, {rhs.text} = {y}"
    if k in ("ideal_eq", "ideal_ne"):
        A, B = ev(a.operands[0]), ev(a.operands[1])
        same = A == B
        if k == "ideal_eq":
            return same, "equal" if same else _difference(A, B)
        return not same, "different: " + _difference(A, B) if not same else "the ideals are equal"
    if k == "subset":
        A, B = ev(a.operands[0]), ev(a.operands[1])
        bad = [g.format() for g in A.minimal_generators() if not B.contains(g)]
        return not bad, "contained" if not bad else "not contained: " + ", ".join(bad[:4])
    if k in ("member", "not_member"):
        f, B = a.operands[0].value, ev(a.operands[1])
        nf = B.reduce(f)
        inside = not nf
        if k == "member":
            return inside, "normal form 0" if inside else f"normal form {nf.format()}"
        return not inside, f"normal form {nf.format()}" if not inside else f"{f.format()} reduces to 0"
    if k == "hilbert_eq":
        A, B = ev(a.operands[0]), ev(a.operands[1])
        ha, hb = hilbert_numerator(A), hilbert_numerator(B)
        ok = ha.numerator == hb.numerator
        return ok, f"{ha.format()} vs {hb.format()}"
    if k in ("is_cm", "not_cm"):
        A = ev(a.operands[0])
        touched.append(A)
        p, h = pd(A), height(A)
        ok = (p == h) == (k == "is_cm")
        return ok, f"computed pd(R/I) = {p}, ht(I) = {h}"
    raise ValueError(f"unknown assertion kind {k}")


def run_claim(claim: Claim) -> ClaimResult:
    """Evaluate every binding and assertion; errors become failed
    assertions carrying the message."""
    t0 = time.perf_counter()
    env: dict = {}
    cache: dict = {}
    results = []
    touched: list = []
    bind_error = None
    for name, node in claim.bindings:
        try:
            env[name] = eval_expr(node, env, claim.ring, cache)
        except Exception as exc:
            bind_error = f"error evaluating {name}: {exc}"
            break

    def ev(node):
        return eval_expr(node, env, claim.ring, cache)

    for i, a in enumerate(claim.assertions):
        if bind_error:
            results.append(AssertionResult(i, a.text, False, bind_error, a.line))
            continue
        try:
            ok, witness = _check(a, ev, touched)
        except Exception as exc:
            ok, witness = False, f"error: {exc}"
        results.append(AssertionResult(i, a.text, ok, witness, a.line))
    return ClaimResult(claim.id, claim.locus, results, time.perf_counter() - t0, touched)


@dataclass
class Report:
    results: list

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def counts(self) -> tuple[int, int]:
        n = sum(len(r.results) for r in self.results)
        ok = sum(a.passed for r in self.results for a in r.results)
        return ok, n - ok

    def format(self) -> str:
        lines = []
        for r in self.results:
            lines.append(f"claim {r.claim_id}: {'PASS' if r.passed else 'FAIL'} ({r.elapsed:.2f}s) {r.locus}")
            for a in r.results:
                lines.append(f"  [{a.index}] {'pass' if a.passed else 'FAIL'}  {a.text}  -- {a.witness}")
        ok, bad = self.counts()
        lines.append(f"{ok} assertions passed, {bad} failed")
        return "\n".join(lines)

    def records(self) -> list[dict]:
        return [
            {"claim": r.claim_id, "assertion": a.index, "status": "pass" if a.passed else "fail",
             "witness": a.witness, "text": a.text}
            for r in self.results for a in r.results
        ]


def _run_one(args):
    text, char, cid = args
    cf = parse_claims(text, char=char)
    res = run_claim(cf.get(cid))
    res.touched = []
    return res


def run_all(cf: ClaimFile, filter: str | None = None, *, jobs: int = 1, source: str | None = None,
            char: int | None = None) -> Report:
    """Run the claims whose id contains ``filter``.  With ``jobs > 1`` and
    the file text in ``source`` the claims are evaluated in worker
    processes; results keep file order."""
    chosen = [c for c in cf.claims if filter is None or filter in c.id]
    if jobs > 1 and source is not None and len(chosen) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, [(source, char, c.id) for c in chosen]))
    else:
        results = [run_claim(c) for c in chosen]
    return Report(results)
