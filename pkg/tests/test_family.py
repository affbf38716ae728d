from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from planedyn.algebra import PolyRing, RationalFunctionField
from planedyn.curve import new_curve, pushforward_image
from planedyn.endo import InfinityMap, new_endomorphism
from planedyn.family import (BadParameter, EndoFamily, family_degree_sequence, marked_infinity_points,
                             specialize, superattracting_parameters)

from conftest import T as TS

T = RationalFunctionField("t")
RT = PolyRing(T, ("x", "y"))
S = RationalFunctionField("s")
RS = PolyRing(S, ("x", "y"))


def test_superattracting_parameter_examples():
    f = InfinityMap.from_rational("u^2 + t", field=T)
    assert superattracting_parameters(f, T(0), 2).values() == [-1, 0]
    rep = superattracting_parameters(f, T(0), 2)
    assert sorted(rep.exact) == [(-1, 2), (0, 1)]
    square = InfinityMap.from_rational("u^2", field=T)
    assert superattracting_parameters(square, T.gen(), 1).values() == [0]
    assert superattracting_parameters(square, T(1), 3).values() == []


def test_period_three_parameters_are_a_packet():
    f = InfinityMap.from_rational("u^2 + t", field=T)
    rep = superattracting_parameters(f, T(0), 3)
    assert rep.values() == [-1, 0]
    assert [p for p, _, _ in rep.packets] == ["t^3 + 2*t^2 + t + 1"]


def test_degenerate_family_is_all_parameters():
    # 0 is a fixed critical point of u^2 + t*u^3 for every t
    f = InfinityMap.from_rational("u^2 + t*u^3", field=T)
    assert superattracting_parameters(f, T(0), 2).all_parameters


def _oracle_parameters(c1, c0, a, n_max):
    """Rational t0 with a(t0) periodic of period <= n_max and vanishing multiplier, for u^2 + c1*t + c0."""
    u = sympy.Symbol("u")
    f = u ** 2 + c1 * TS + c0
    out = set()
    for n in range(1, n_max + 1):
        orbit = [a]
        for _ in range(n):
            orbit.append(sympy.expand(f.subs(u, orbit[-1])))
        fix = sympy.expand(orbit[n] - a)
        lam = sympy.Mul(*[2 * p for p in orbit[:n]])
        if fix == 0:
            continue
        g = sympy.gcd(fix, sympy.expand(lam))
        for r in sympy.Poly(g, TS).ground_roots() if g.has(TS) else []:
            out.add(Fraction(int(r.p), int(r.q)))
    return sorted(out)


@settings(max_examples=20)
@given(st.integers(-2, 2).filter(bool), st.integers(-2, 2), st.integers(-2, 2), st.integers(1, 3))
def test_parameters_match_sympy(c1, c0, a, n_max):
    f = InfinityMap.from_rational(f"u^2 + ({c1})*t + ({c0})", field=T)
    assert superattracting_parameters(f, T(a), n_max).values() == _oracle_parameters(c1, c0, a, n_max)


@settings(max_examples=10)
@given(st.integers(-2, 2).filter(bool), st.integers(-2, 2), st.integers(-2, 2))
def test_parameter_sets_grow_with_n_max(c1, c0, a):
    f = InfinityMap.from_rational(f"u^2 + ({c1})*t + ({c0})", field=T)
    sets = [set(superattracting_parameters(f, T(a), n).values()) for n in (1, 2, 3)]
    assert sets[0] <= sets[1] <= sets[2]


# ------------------------------------------------------------ marked points
def test_marked_points():
    (m,) = marked_infinity_points(RS("y - s*x"))
    assert m.text() == "s"
    (m,) = marked_infinity_points(RT("y^2 - x + 0*t"))
    assert m.point[1] == 0 and m.multiplicity == 2
    (m,) = marked_infinity_points(RT("y^2 - t*x^2"))
    assert m.packet is not None and m.degree == 2


@settings(max_examples=20)
@given(st.lists(st.integers(-2, 2), min_size=3, max_size=3))
def test_marked_point_count_is_degree(c):
    g = RT(f"y^2 + ({c[0]})*t*x*y + ({c[1]} + t)*x^2 + ({c[2]})*x + 1")
    pts = marked_infinity_points(g)
    assert sum(m.degree * m.multiplicity for m in pts) == 2


# ------------------------------------------------------------ specialization
def test_specialize_examples():
    F = new_endomorphism(RS("x^2"), RS("y^2 + s*x"))
    G = specialize(F, 1)
    assert (str(G.P), str(G.Q)) == ("x^2", "y^2 + x")
    t = T.gen()
    assert specialize((t * t + 1) / t, 2) == Fraction(5, 2)
    fam = EndoFamily.from_endo(new_endomorphism(RT("x^2 + t*y^2"), RT("x*y")))
    assert fam.bad_text() == ["t"]
    with pytest.raises(BadParameter) as exc:
        fam.specialize(0)
    assert exc.value.witness == ["t"]
    with pytest.raises((BadParameter, ZeroDivisionError)):
        specialize(1 / t, 0)


@settings(max_examples=10)
@given(st.integers(-3, 3).filter(bool))
def test_specialization_commutes_with_pushforward(s0):
    F = new_endomorphism(RS("x^2 - s"), RS("y^2 + s*x*y"))
    C = new_curve(RS("y - s*x - 1"))
    fam = EndoFamily.from_endo(F)
    if fam.is_bad(s0):
        return
    generic = pushforward_image(F, C).image
    assert specialize(generic, s0) == pushforward_image(fam.specialize(s0), specialize(C, s0)).image


# ------------------------------------------------------------ degree sequences
def test_family_degree_sequence():
    F = new_endomorphism(RS("x^2"), RS("y^2 + s*x"))
    rep = family_degree_sequence(F, new_curve(RS("y - s*x")), 2, special=(0,))
    assert rep.generic.degrees == [1, 2, 4]
    assert all(d >= 2 ** n for n, d in enumerate(rep.generic.degrees))
    drop = rep.spot_checks[-1]
    assert drop["degrees"] == [1, 1, 1] and drop["flag"] == "degree drop"
    assert all(c["matches_generic"] for c in rep.spot_checks[:-1])
    const = family_degree_sequence(new_endomorphism(RS("x^2"), RS("y^2 + 0*s")), new_curve(RS("y - x")), 2)
    assert const.generic.degrees == [1, 1, 1]
