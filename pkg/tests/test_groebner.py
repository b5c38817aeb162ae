import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cubicpd.groebner import buchberger, is_groebner, lead_ideal, normal_form, spoly
from cubicpd.polyring import FieldSpec, MonomialOrder, PolyRing

from oracles import sympy_groebner
from strategies import forms, ideals, polynomials, ring

R3 = ring(3)


def _exps(monos):
    return sorted(m.exponents for m in monos)


def test_normal_form_examples():
    R = PolyRing("x y")
    assert normal_form(R("x^2*y+y^3"), [R("x^2")]) == R("y^3")
    G = [R("x^2+y^2"), R("x*y")]
    for g in G:
        assert normal_form(g, G).is_zero()
    assert normal_form(R.zero(), G).is_zero()


def test_normal_form_intro_nonmember():
    R = PolyRing("x y a b c")
    G = buchberger([R("x^3"), R("y^3"), R("x^2*a+x*y*b+y^2*c")])
    assert not normal_form(R("x^2*y^2"), G).is_zero()


def test_buchberger_examples():
    R = PolyRing("x y")
    assert buchberger([R("x^2"), R("x*y")]).format() == ["x*y", "x^2"]
    assert sorted(buchberger([R("x-y"), R("y")]).format()) == ["x", "y"]
    S = PolyRing("x y z")
    G = buchberger([S("x^2-y*z"), S("x*y-z^2")])
    assert len(G) == 3
    assert G[2].leading_monomial().exponents == (0, 2, 1)


def test_unit_ideal():
    R = PolyRing("x y")
    G = buchberger([R("x"), R("1+x")])
    assert G.is_unit() and G.format() == ["1"]
    assert _exps(lead_ideal(G)) == [(0, 0)]


def test_lead_ideal_examples():
    R = PolyRing("x y")
    assert _exps(lead_ideal(buchberger([R("x^2"), R("x*y")]))) == [(1, 1), (2, 0)]
    S = PolyRing("x y u v")
    gens = [S(m) for m in ("x*u", "x*v", "y*u", "y*v")]
    assert _exps(lead_ideal(buchberger(gens))) == sorted(m.leading_monomial().exponents for m in gens)


def test_is_groebner_examples():
    R = PolyRing("x y")
    assert is_groebner([R("x^2"), R("x*y")])
    L = PolyRing("x y z", order=MonomialOrder.lex())
    assert not is_groebner([L("x^2-y"), L("x^3-z")])
    assert is_groebner([], ring=L)


def test_spoly():
    R = PolyRing("x y")
    assert spoly(R("x^2"), R("x*y")).is_zero()


def test_degree_bound_truncates():
    R = PolyRing("x y z")
    G = buchberger([R("x^2-y*z"), R("x*y-z^2")], degree_bound=2)
    assert len(G) == 2


def test_lex_matches_sympy():
    L = PolyRing("x y z", order=MonomialOrder.lex())
    F = [L("x^2-y"), L("x^3-z")]
    assert buchberger(F).format() == [g.format() for g in sorted(sympy_groebner(F, L), key=lambda p: p.lead_key)]


def test_rational_field_matches_sympy():
    Q = PolyRing("x y z", FieldSpec.rationals())
    F = [Q("3*x^2-y*z+2*z^2"), Q("x*y-5*z^2"), Q("y^3-x*z^2")]
    G = buchberger(F)
    assert sorted(G.format()) == sorted(g.format() for g in sympy_groebner(F, Q))


@given(st.lists(forms(R3, 2, max_terms=4), min_size=1, max_size=3))
def test_matches_sympy_on_random_quadrics(F):
    G = buchberger(F)
    assert sorted(G.format()) == sorted(g.format() for g in sympy_groebner(F, R3))


@given(st.lists(polynomials(R3, max_terms=4, max_exp=2), min_size=1, max_size=3))
def test_soundness_and_criterion(F):
    if all(f.is_zero() for f in F):
        return
    G = buchberger(F)
    assert is_groebner(list(G))
    for f in F:
        assert G.reduce(f).is_zero()


@given(st.lists(forms(R3, 3, max_terms=4), min_size=1, max_size=4), st.randoms(use_true_random=False))
def test_independent_of_generator_order(F, rnd):
    G = buchberger(F)
    H = list(F)
    rnd.shuffle(H)
    assert buchberger(H).format() == G.format()


@given(st.lists(forms(R3, 3, max_terms=4), min_size=1, max_size=4))
def test_criteria_do_not_change_result(F):
    assert buchberger(F, criteria=True).format() == buchberger(F, criteria=False).format()


@given(ideals(R3, max_gens=3), polynomials(R3, max_terms=4), polynomials(R3, max_terms=4),
       st.integers(1, 32002))
def test_normal_form_linear_and_idempotent(I, f, g, c):
    G = I.gb
    nf = G.reduce
    assert nf(f + g) == nf(f) + nf(g)
    assert nf(f * c) == nf(f) * c
    assert nf(nf(f)) == nf(f)
    assert nf(f - nf(f)).is_zero()


def test_reduced_basis_properties():
    rng = random.Random(3)
    R = ring(4)
    from cubicpd.stress import random_form

    F = [random_form(rng, R, 3, 0.4) for _ in range(3)]
    G = buchberger(F)
    leads = [g.lead_key for g in G]
    assert leads == sorted(leads)
    for i, g in enumerate(G):
        assert g.leading_coefficient() == 1
        for j, k in enumerate(leads):
            if j != i:
                assert not any(R.divides_key(k, t) for t in g._t)
