"""Independent reference computations used as test oracles.

``sympy_groebner`` asks sympy for a reduced basis; ``brute_hilbert``
computes ``dim_k (R/I)_n`` by row-reducing all monomial multiples of
the generators, without Groebner bases.
"""

from fractions import Fraction

import sympy

from cubicpd.ideals import monomials_of_degree
from cubicpd.linalg import rank


def sympy_groebner(polys, R):
    gens = sympy.symbols(R.variables)
    exprs = [sympy.sympify(p.format().replace("^", "**"), locals=dict(zip(R.variables, gens))) for p in polys]
    order = {"grevlex": "grevlex", "lex": "lex"}[R.order.kind]
    kw = {"modulus": R.char} if R.char else {}
    G = sympy.groebner(exprs, *gens, order=order, **kw)
    out = []
    for g in G.exprs:
        terms = sympy.Poly(g, *gens, **kw).terms()
        out.append(R.from_terms([(int(c) if R.char else Fraction(int(c.p), int(c.q)), m) for m, c in terms]).monic())
    return out


def brute_hilbert(I, n):
    """``dim_k (R/I)_n`` from the rank of all degree-``n`` multiples."""
    R = I.ring
    total = len(monomials_of_degree(R, n))
    rows = []
    for g in I.generators:
        d = g.total_degree()
        if d > n:
            continue
        for m in monomials_of_degree(R, n - d):
            rows.append({k + m: c for k, c in g._t.items()})
    return total - rank(rows, R.field)
