import pytest

from cubicpd.ideals import Ideal, colon, find_complete_intersection, intersect, power, product
from cubicpd.invariants import multiplicity
from cubicpd.linkage import LinkPreconditionError, find_ci, link, verify_link_properties
from cubicpd.polyring import PolyRing

INTRO = PolyRing("x y a b c")


def I_intro():
    return Ideal(INTRO, ["x^3", "y^3", "x^2*a+x*y*b+y^2*c"])


def test_intro_link_multiplicity():
    I = I_intro()
    rec = link(Ideal(INTRO, ["x^3", "y^3"]), I)
    assert rec.invariants["e(C)"] == 9
    assert rec.invariants["e(L)"] == 9 - multiplicity(I)
    assert not rec.degenerate


def test_self_link_is_degenerate():
    C = Ideal(INTRO, ["x^3", "y^3"])
    rec = link(C, C)
    assert rec.degenerate and rec.link.is_unit() and rec.invariants["e(L)"] == 0
    rep = verify_link_properties(rec)
    assert rep.passed and rep["degenerate"]


def test_mixed_cubic_link():
    R = PolyRing("x y u v a b")
    p = Ideal(R, ["x", "y"])
    J = product(power(p, 2) + Ideal(R, ["a*x+b*y"]), Ideal(R, ["u", "v"]))
    rec = link(Ideal(R, ["x^2*u", "y^2*v"]), J)
    expected = Ideal(R, ["x^2*u", "y^2*v", "x*y*u*v", "a*x*u*v-b*y*u*v", "x^2*y^2"])
    assert rec.link == expected


def test_preconditions():
    S = PolyRing("x y z")
    J = Ideal(S, ["x", "y"])
    with pytest.raises(LinkPreconditionError, match="not contained"):
        link(Ideal(S, ["x", "z"]), J)
    with pytest.raises(LinkPreconditionError, match="not a complete intersection"):
        link(Ideal(S, ["x", "x*y"]), J)
    with pytest.raises(LinkPreconditionError, match="height mismatch"):
        link(Ideal(S, ["x"]), J)


def test_verify_intro_properties():
    rep = verify_link_properties(link(Ideal(INTRO, ["x^3", "y^3"]), I_intro()))
    assert rep.passed, rep.format()
    assert {n for n, _, _ in rep.checks} == {"e-additivity", "double-link", "hilbert", "pd"}


def test_double_link_of_unmixed_ideal():
    R = PolyRing("x y z w u v")
    K = intersect(intersect(Ideal(R, ["x", "y"]), Ideal(R, ["z", "w"])), Ideal(R, ["u", "v"]))
    C = Ideal(R, ["x*z*v", "y*w*u"])
    L = colon(C, K)
    assert colon(C, L) == K


def test_two_links_have_equal_hilbert_series():
    I = I_intro()
    C = Ideal(INTRO, ["x^3", "y^3"])
    L = link(C, I).link
    D = find_ci(L, [3, 3], seed=1)
    assert not (D.ideal() == C)
    L2 = link(D, L).link
    U = colon(C, L)
    assert L2.hilbert.numerator == U.hilbert.numerator


def test_second_ci_with_explicit_witness():
    I = I_intro()
    rec = link(Ideal(INTRO, ["x^3", "y^3"]), I)
    D = find_complete_intersection(rec.link, [3, 3], seed=3)
    rep = verify_link_properties(rec, D)
    assert rep.passed, rep.format()
