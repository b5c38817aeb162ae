"""Hypothesis strategies for polynomials and ideals."""

from hypothesis import strategies as st

from cubicpd.ideals import Ideal, monomials_of_degree
from cubicpd.polyring import FieldSpec, MonomialOrder, Polynomial, PolyRing

P = 32003


def ring(nvars=3, char=P, order=None):
    names = ["x", "y", "z", "u", "v", "w"][:nvars]
    return PolyRing(names, FieldSpec.from_char(char), order or MonomialOrder.grevlex())


@st.composite
def exponents(draw, n, max_exp=4):
    return tuple(draw(st.lists(st.integers(0, max_exp), min_size=n, max_size=n)))


@st.composite
def polynomials(draw, R, max_terms=5, max_exp=3):
    terms = draw(st.lists(
        st.tuples(st.integers(-50, 50), exponents(R.nvars, max_exp)), max_size=max_terms))
    return R.from_terms(terms)


@st.composite
def forms(draw, R, degree, max_terms=4):
    """A nonzero homogeneous polynomial of the given degree."""
    monos = monomials_of_degree(R, degree)
    picks = draw(st.lists(st.sampled_from(monos), min_size=1, max_size=max_terms, unique=True))
    coeffs = draw(st.lists(st.integers(1, R.char - 1 if R.char else 20), min_size=len(picks), max_size=len(picks)))
    return Polynomial(R, dict(zip(picks, (R.field(c) for c in coeffs))))


@st.composite
def ideals(draw, R, max_gens=3, max_degree=3, min_gens=1):
    n = draw(st.integers(min_gens, max_gens))
    gens = [draw(forms(R, draw(st.integers(1, max_degree)))) for _ in range(n)]
    return Ideal(R, gens)
