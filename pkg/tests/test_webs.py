from types import SimpleNamespace

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from planedyn.algebra import QQ, PolyRing, RationalFunctionField
from planedyn.endo import new_endomorphism
from planedyn.search import stabilization_audit
from planedyn.webs import (WebError, build_web_form, factorization_check, is_invariant_web, parse_form,
                           pullback_form)

from conftest import R2, X, Y, Z, sym

RS = PolyRing(QQ, ("x", "y", "s"))
R3 = PolyRing(QQ, ("x", "y", "z", "k"))
AFF = ("x", "y")
SQUARE = new_endomorphism("x^2", "y^2")
A2_SPLIT = new_endomorphism("x^2 - 2*y", "y^2 - 2*x")
INCIDENCE = "z*k^3 - x*k^2 + y*k - z"
DX, DY, DZ = sympy.symbols("dx dy dz")


def _as_sympy(form):
    return sympy.sympify(str(form.poly).replace("^", "**"))


def test_pencil_form():
    w = build_web_form(RS("y - s*x"), "s", 1)
    assert w == parse_form("x*dy - y*dx", AFF)


def test_pullback_examples():
    w = parse_form("x*dy - y*dx", AFF)
    assert pullback_form(SQUARE, w) == parse_form("2*x*y*(x*dy - y*dx)", AFF)
    # the identity is not a regular endomorphism; pullback only needs its components
    ident = SimpleNamespace(P=R2("x"), Q=R2("y"), field=QQ)
    assert pullback_form(ident, w) == w
    zero = parse_form("0*dx", AFF)
    assert pullback_form(SQUARE, zero).is_zero()


def test_pullback_is_compatible_with_composition():
    F = new_endomorphism("x^2 + y", "y^2")
    G = new_endomorphism("x^2", "y^2 - x")
    w = parse_form("x*dy - y*dx + dx", AFF)
    # (F o G)^* = G^* F^*, with F o G = (P_F(P_G, Q_G), Q_F(P_G, Q_G))
    FG = new_endomorphism(F.P.compose({"x": G.P, "y": G.Q}), F.Q.compose({"x": G.P, "y": G.Q}))
    assert pullback_form(FG, w) == pullback_form(G, pullback_form(F, w))


def test_pullback_is_multiplicative():
    a, b = parse_form("x*dy - y*dx", AFF), parse_form("dx + y*dy", AFF)
    prod = parse_form("(x*dy - y*dx)*(dx + y*dy)", AFF)
    F = new_endomorphism("x^2 - y", "y^2 + x")
    assert pullback_form(F, prod).poly == pullback_form(F, a).poly * pullback_form(F, b).poly


def test_invariance_examples():
    w = parse_form("x*dy - y*dx", AFF)
    inv = is_invariant_web(SQUARE, w)
    assert inv.holds and str(inv.factor) == "2*x*y"
    assert not is_invariant_web(new_endomorphism("x^2", "y^2 - x"), w)
    W = build_web_form(R3(INCIDENCE), "k", 3)
    inv = is_invariant_web(A2_SPLIT, W)
    assert inv.holds and sympy.factor(sym(inv.factor)) == sympy.factor(8 * Z ** 2 * (X * Y - Z ** 2) ** 2)


def test_a2_form_matches_displayed_expansion():
    W = build_web_form(R3(INCIDENCE), "k", 3)
    x, y = X, Y
    alpha, beta = DY - y * DZ, -DX + x * DZ
    shown = alpha ** 3 + x * alpha ** 2 * beta + y * alpha * beta ** 2 + beta ** 3
    assert sympy.expand(_as_sympy(W).subs(Z, 1) - shown) == 0
    assert W.k == 3 and not W.is_degenerate()
    assert factorization_check(W)["factorizable"]


@pytest.mark.parametrize("point", [(2, 3, 1), (-1, 5, 2), (3, -2, 1)])
def test_a2_form_matches_root_product(point):
    # product over the roots k_r of d(incidence) at a point, proportional to the form there
    W = build_web_form(R3(INCIDENCE), "k", 3)
    k = sympy.Symbol("k")
    x0, y0, z0 = point
    P = sympy.sympify(INCIDENCE.replace("^", "**"))
    vals = {X: x0, Y: y0, Z: z0}
    roots = sympy.Poly(P.subs(vals), k).nroots(n=40)
    dP = sum(sympy.diff(P, v) * d for v, d in ((X, DX), (Y, DY), (Z, DZ)))
    prod = sympy.expand(sympy.Mul(*[dP.subs(vals).subs(k, r) for r in roots]))
    ours = sympy.expand(_as_sympy(W).subs(vals))
    ratio = None
    for mono in sympy.Poly(ours, DX, DY, DZ).monoms():
        a = complex(sympy.Poly(ours, DX, DY, DZ).coeff_monomial(mono))
        b = complex(sympy.Poly(prod, DX, DY, DZ).coeff_monomial(mono))
        ratio = ratio if ratio is not None else b / a
        assert abs(b - ratio * a) < 1e-20 * max(1, abs(b))


def test_repeated_members_are_rejected():
    with pytest.raises(WebError):
        build_web_form(RS("(y - s*x)^2"), "s", 2)
    assert build_web_form(RS("(y - s*x)^2"), "s", 1, e=2) == parse_form("x*dy - y*dx", AFF)
    with pytest.raises(WebError):
        build_web_form(RS("y - s*x"), "s", 2)


def test_square_form_fails_factorization():
    sq = parse_form("(x*dy - y*dx)^2", AFF)
    assert not factorization_check(sq)["factorizable"]


@settings(max_examples=10)
@given(st.tuples(*[st.integers(-3, 3)] * 4).filter(lambda m: m[0] * m[3] - m[1] * m[2] != 0))
def test_form_is_independent_of_parametrization(m):
    # s -> (a*s + b)/(c*s + d), denominators cleared
    a, b, c, d = m
    base = build_web_form(R3(INCIDENCE), "k", 3)
    k = sympy.Symbol("k")
    P = sympy.sympify(INCIDENCE.replace("^", "**"))
    moved = sympy.expand(sympy.cancel((c * k + d) ** 3 * P.subs(k, (a * k + b) / (c * k + d))))
    other = build_web_form(R3(str(moved).replace("**", "^")), "k", 3)
    assert other == base


def test_family_invariance_gives_web_invariance():
    K = RationalFunctionField("k")
    R = PolyRing(K, ("x", "y"))
    audit = stabilization_audit(A2_SPLIT, R("y - k*x - 1/k + k^2"))
    assert audit.status == "found"
    assert is_invariant_web(A2_SPLIT, build_web_form(R3(INCIDENCE), "k", 3)).holds
    pencil = build_web_form(RS("y - s*x"), "s", 1)
    assert stabilization_audit(SQUARE, PolyRing(RationalFunctionField("s"), AFF)("y - s*x")).status == "found"
    assert is_invariant_web(SQUARE, pencil).holds
