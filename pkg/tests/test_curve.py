from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from planedyn.algebra import PolyRing, RationalFunctionField
from planedyn.curve import (infinity_points, invariance_certificate, line_at_infinity, new_curve,
                            pushforward_image)
from planedyn.endo import new_endomorphism
from planedyn.family import specialize
from planedyn.local import PlanePoint, intersection_multiplicity

from conftest import X, Y, polys, sym

U, V, S = sympy.symbols("u v s")
TWO_CYCLE = new_endomorphism("x^2", "y^2 - x")


def test_new_curve_examples():
    C = new_curve("y")
    assert C.degree == 1 and str(C.g) == "y"
    D = new_curve("y^2 - x")
    assert D.degree == 2 and D == new_curve("y^2 - x*z", "homogeneous")
    assert new_curve("(y - x)^2") == new_curve("y - x")
    with pytest.raises(ValueError):
        new_curve("3")


@given(polys(max_deg=3))
def test_reduction_idempotent(g):
    if g.is_constant():
        return
    C = new_curve(g)
    assert new_curve(C.g, "homogeneous") == C


def test_pushforward_examples():
    c1 = pushforward_image(TWO_CYCLE, new_curve("y"))
    assert c1.image == new_curve("y^2 - x") and c1.delta == 1
    c2 = pushforward_image(TWO_CYCLE, c1.image)
    assert c2.image == new_curve("y") and c2.delta == 4
    c3 = pushforward_image(new_endomorphism("x^2", "y^2"), new_curve("y - x"))
    assert c3.image == new_curve("y - x") and c3.delta == 2
    for c in (c1, c2, c3):
        assert c.verify(TWO_CYCLE if c is not c3 else new_endomorphism("x^2", "y^2"))
        assert c.degree_formula_holds()


def test_delta_four_by_fibre_count():
    # the points of y^2 = x over a generic point (u, 0) of the image line y = 0
    u = sympy.Rational(7, 3)
    sols = sympy.solve([X ** 2 - u, Y ** 2 - X - 0, ], [X, Y], dict=True)
    on_curve = [s for s in sols if sympy.simplify(s[Y] ** 2 - s[X]) == 0]
    assert len({(s[X], s[Y]) for s in on_curve}) == 4


def _oracle_image(F, g):
    """Generator of the elimination ideal (g, u - P, v - Q) in Q[u, v]."""
    G = sympy.groebner([sym(g), U - sym(F.P), V - sym(F.Q)], X, Y, U, V, order="lex")
    elim = [p for p in G.exprs if not (p.free_symbols & {X, Y})]
    assert len(elim) == 1
    return elim[0].subs({U: X, V: Y}, simultaneous=True)


SMALL_MAPS = [("x^2", "y^2 - x"), ("x^2 + y", "y^2"), ("x^2 - 2*y", "y^2 - 2*x"), ("x*y + x", "x^2 - y^2 + 1"),
              ("x^2 + x*y", "y^2 + 1")]


@settings(max_examples=25)
@given(st.sampled_from(SMALL_MAPS), polys(max_deg=2, max_terms=3))
def test_pushforward_matches_groebner_elimination(maps, g):
    if g.is_constant():
        return
    F = new_endomorphism(*maps)
    cert = pushforward_image(F, new_curve(g))
    oracle = _oracle_image(F, new_curve(g).affine)
    assert sympy.simplify(sym(cert.image.affine) / oracle).is_number
    assert cert.verify(F)
    assert cert.delta is None or cert.degree_formula_holds()


def test_reducible_curve_with_mixed_fibre_degrees():
    # V(x) -> V(x) with degree 2 and V(y) -> V(y^2 - x) with degree 1
    cert = pushforward_image(TWO_CYCLE, new_curve("x*y"))
    assert cert.image == new_curve("x*(y^2 - x)")
    assert cert.delta is None and cert.verify(TWO_CYCLE)


@settings(max_examples=20)
@given(st.sampled_from(SMALL_MAPS), st.integers(-3, 3), st.integers(-3, 3))
def test_delta_matches_fibre_count_on_lines(maps, m, c):
    F = new_endomorphism(*maps)
    cert = pushforward_image(F, new_curve(f"y - {m}*x - {c}"))
    t, t0 = sympy.symbols("t"), sympy.Rational(11, 7)
    px = sym(F.P).subs({X: t, Y: m * t + c}, simultaneous=True)
    qx = sym(F.Q).subs({X: t, Y: m * t + c}, simultaneous=True)
    fibre = sympy.gcd(sympy.expand(px - px.subs(t, t0)), sympy.expand(qx - qx.subs(t, t0)))
    assert sympy.degree(fibre, t) == cert.delta


@given(st.integers(-5, 5), st.integers(-5, 5))
def test_pushforward_soundness_on_rational_points(a, b):
    # the parabola y^2 = x has rational points (b^2, b); images must satisfy h
    F = new_endomorphism(("x^2 + y"), "y^2 - 2*x")
    C = new_curve("y^2 - x")
    h = pushforward_image(F, C).image.affine
    x0, y0 = Fraction(b * b), Fraction(b)
    img = {"x": F.P.evaluate({"x": x0, "y": y0}), "y": F.Q.evaluate({"x": x0, "y": y0})}
    assert h.evaluate(img) == 0


def test_two_cycle_closes():
    C = new_curve("y")
    img = pushforward_image(TWO_CYCLE, pushforward_image(TWO_CYCLE, C).image).image
    assert img == C


def test_invariance_certificates():
    cert = invariance_certificate(TWO_CYCLE, new_curve("y"), 2)
    assert cert.holds
    Ph = PolyRing(cert.cofactor.ring.field, cert.cofactor.ring.vars)
    assert cert.cofactor * Ph("y") == Ph("(y^2 - x*z)^2 - x^2*z^2")
    sq = invariance_certificate(new_endomorphism("x^2", "y^2"), new_curve("y - x"), 1)
    assert sq.holds and sq.cofactor == Ph("y + x")
    assert not invariance_certificate(TWO_CYCLE, new_curve("y"), 1).holds
    with pytest.raises(ValueError):
        invariance_certificate(TWO_CYCLE, line_at_infinity(), 1)


def test_infinity_points_examples():
    pts, packets = infinity_points(new_curve("y^2 - x"))
    assert [(p.point, p.multiplicity) for p in pts] == [((1, 0), 2)] and not packets
    pts, _ = infinity_points(new_curve("y - x"))
    assert [(p.point, p.multiplicity) for p in pts] == [((1, 1), 1)]
    pts, _ = infinity_points(new_curve("x*y - 1"))
    assert sorted((p.point, p.multiplicity) for p in pts) == [((0, 1), 1), ((1, 0), 1)]
    _, packets = infinity_points(new_curve("x^2 + y^2 - 1"))
    assert packets[0].degree == 2


@given(polys(max_deg=3))
def test_infinity_multiplicities_sum_to_degree(g):
    if g.is_constant():
        return
    C = new_curve(g)
    if C.contains_line_at_infinity():
        return
    pts, packets = infinity_points(C)
    total = sum(p.multiplicity for p in pts) + sum(pk.degree * pk.multiplicity for pk in packets)
    assert total == C.degree


def test_infinity_multiplicity_agrees_with_local_module():
    C = new_curve("y^2 - x")
    H = line_at_infinity()
    assert intersection_multiplicity(C, H, PlanePoint((Fraction(0), Fraction(0)), "x")) == 2
    pts, _ = infinity_points(new_curve("y - x"))
    assert intersection_multiplicity(new_curve("y - x"), H, PlanePoint((Fraction(1), Fraction(0)), "x")) == 1


def test_function_field_image_specializes():
    K = RationalFunctionField("s")
    R = PolyRing(K, ("x", "y"))
    F = new_endomorphism(R("x^2"), R("y^2 + s*x"))
    cert = pushforward_image(F, new_curve(R("y - s*x")))
    assert cert.image.degree == 2 and cert.verify(F)
    for s0 in (1, 2, Fraction(-1, 3)):
        G = specialize(F, s0)
        direct = pushforward_image(G, specialize(new_curve(R("y - s*x")), s0)).image
        assert specialize(cert.image, s0) == direct
