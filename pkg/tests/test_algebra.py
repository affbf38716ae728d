from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from planedyn.algebra import (QQ, DegenerateInput, NumberField, PolyRing, PolySyntaxError, RationalFunctionField,
                              ZeroDivisorSplit, canonical, divides, gcd, resultant, squarefree_part,
                              univariate_roots)
from planedyn.algebra.interp import interpolate, rational_reconstruction

from conftest import R2, X, Y, T, polys, same, sym

R = R2
U = PolyRing(QQ, ("t",))


# ------------------------------------------------------------------ scalars
def test_rational_function_field_arithmetic():
    K = RationalFunctionField("t")
    t = K.gen()
    a = (t * t + 1) / t
    assert a.evaluate(Fraction(2)) == Fraction(5, 2)
    assert a * (t / (t * t + 1)) == K.one
    assert (t - 1) / (t * t - 1) == 1 / (t + 1)


def test_number_field_inverse_and_zero_divisor():
    K = NumberField((1, 1, 1), "w")
    w = K.gen()
    assert w ** 3 == K.one
    assert w * (1 / w) == K.one
    L = NumberField((-1, 0, 1), "v")     # v^2 - 1 is not irreducible
    with pytest.raises(ZeroDivisorSplit):
        1 / (L.gen() - 1)


@given(st.integers(-50, 50), st.integers(1, 50))
def test_rationals_lowest_terms(a, b):
    f = QQ.convert(Fraction(a, b))
    assert f.denominator > 0 and sympy.gcd(f.numerator, f.denominator) == 1


# -------------------------------------------------------------- resultants
def test_resultant_examples():
    assert resultant(R("y^2 - x"), R("y - 3"), "y") == R("9 - x")
    S = PolyRing(QQ, ("a", "b", "c", "d", "y"))
    assert resultant(S("a*y + b"), S("c*y + d"), "y") == S("a*d - b*c")
    assert resultant(R("y^2 - x"), R("y^2 - x"), "y").is_zero()
    with pytest.raises(DegenerateInput):
        resultant(R.zero, R.zero, "y")


def _sylvester(f, g, var):
    """Determinant of the Sylvester matrix (sympy.resultant has sign slips, e.g. on y + 1, y^3)."""
    a = sympy.Poly(f, var).all_coeffs()
    b = sympy.Poly(g, var).all_coeffs()
    m, n = len(a) - 1, len(b) - 1
    rows = [[0] * i + a + [0] * (n - 1 - i) for i in range(n)]
    rows += [[0] * i + b + [0] * (m - 1 - i) for i in range(m)]
    return sympy.Matrix(rows).det()


@given(polys(max_deg=3), polys(max_deg=3))
def test_resultant_matches_sylvester_determinant(f, g):
    if f.degree_in("y") < 1 or g.degree_in("y") < 1:
        return
    assert same(resultant(f, g, "y"), _sylvester(sym(f), sym(g), Y))


@given(polys(max_deg=3), polys(max_deg=3))
def test_resultant_antisymmetry(f, g):
    if f.degree_in("y") < 1 or g.degree_in("y") < 1:
        return
    sign = (-1) ** (f.degree_in("y") * g.degree_in("y"))
    assert resultant(f, g, "y") == resultant(g, f, "y") * sign


# ------------------------------------------------------------ gcd and friends
def test_squarefree_examples():
    assert squarefree_part(R("x^2*y")) == canonical(R("x*y"))
    assert squarefree_part(R("(x+y)^3*(x-y)")) == canonical(R("(x+y)*(x-y)"))
    assert squarefree_part(R("5")) == R.one
    with pytest.raises(DegenerateInput):
        squarefree_part(R.zero)


@given(polys(max_deg=2), polys(max_deg=2))
def test_gcd_matches_sympy(a, b):
    c = R("x - y + 1")
    f, g = a * c, b * c
    ours = gcd(f, g)
    oracle = sympy.gcd(sym(f), sym(g))
    assert sympy.simplify(sym(ours) / oracle).is_number


@given(polys(max_deg=3))
def test_squarefree_idempotent_on_squares(f):
    if f.is_constant():
        return
    assert squarefree_part(f * f) == squarefree_part(f)


@given(polys(max_deg=3))
def test_squarefree_matches_sympy(f):
    if f.is_constant():
        return
    _, factors = sympy.factor_list(sym(f))
    oracle = sympy.Mul(*[b for b, _ in factors])
    assert sympy.simplify(sym(squarefree_part(f)) / oracle).is_number


def test_divides_examples():
    ok, q = divides(R("y - x"), R("y^2 - x^2"))
    assert ok and q == R("y + x")
    assert divides(R("y"), R("y^2 - x")) == (False, None)
    K = NumberField((1, 1, 1), "k")
    S = PolyRing(K, ("w", "z"))
    ok, q = divides(S("w - k*z"), S("w^2 - k^2*z^2"))
    assert ok and q == S("w + k*z")


@given(polys(max_deg=2), polys(max_deg=2))
def test_divides_recovers_cofactor(f, q):
    if f.is_zero():
        return
    ok, cof = divides(f, f * q)
    assert ok and cof == q


@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) - b == a


# ------------------------------------------------------------- composition
def test_compose_examples():
    sub = {"x": R("x^2"), "y": R("y^2 - x")}
    assert R("y").compose(sub) == R("y^2 - x")
    assert R("y^2 - x").compose(sub) == R("(y^2 - x)^2 - x^2")
    assert R("x").compose({"x": R("x"), "y": R("y")}) == R("x")


@given(polys(max_deg=2), polys(max_deg=2), polys(max_deg=2))
def test_compose_matches_sympy(f, p, q):
    ours = f.compose({"x": p, "y": q})
    oracle = sym(f).subs({X: sym(p), Y: sym(q)}, simultaneous=True)
    assert same(ours, oracle)


# ------------------------------------------------------------------- parsing
@given(polys())
def test_print_parse_round_trip(f):
    assert R(str(f)) == f


def test_parse_rejects_bad_input():
    for text in ("x^y", "x^-1", "x +* y", "q + 1", "x^1.5"):
        with pytest.raises((PolySyntaxError, ValueError)):
            R(text)


def test_canonical_scaling():
    assert canonical(R("2*x - 4*y")) == canonical(R("-x + 2*y"))
    assert canonical(R("1/2*x + 1/3")) == R("3*x + 2")


# --------------------------------------------------------------------- roots
def test_exact_roots():
    assert [r for r, _ in univariate_roots(U("t^2 - 1"))] == [-1, 1]
    assert univariate_roots(U("t^2 - 2")) == []
    assert [r for r, _ in univariate_roots(U("t^3 - t"))] == [-1, 0, 1]
    assert univariate_roots(U("7")) == []


@given(st.lists(st.integers(-6, 6), min_size=2, max_size=6))
def test_numeric_roots_residuals(coeffs):
    if coeffs[-1] == 0 or all(c == 0 for c in coeffs[:-1]):
        return
    f = sum((U.monomial((i,), c) for i, c in enumerate(coeffs)), U.zero)
    if f.degree() < 1:
        return
    roots = univariate_roots(f, "numeric")
    assert sum(r.multiplicity for r in roots) == f.degree()
    poly = sympy.Poly(list(reversed(coeffs)), T)
    for r in roots:
        val = complex(poly.eval(sympy.Float(r.value.real, 30) + sympy.I * sympy.Float(r.value.imag, 30)))
        assert abs(val) <= max(r.residual, 1e-8) * 10


# ------------------------------------------------------------- interpolation
def test_interpolation_exact():
    xs = [Fraction(i) for i in range(5)]
    ys = [x ** 3 - 2 * x + Fraction(1, 3) for x in xs]
    assert interpolate(xs, ys) == (Fraction(1, 3), Fraction(-2), Fraction(0), Fraction(1))


def test_rational_reconstruction_recovers_function():
    xs = [Fraction(i) for i in range(2, 14)]
    f = lambda t: (3 * t ** 2 - t + Fraction(1, 2)) / (t ** 2 + 5 * t - 7)
    num, den = rational_reconstruction(xs[:9], [f(x) for x in xs[:9]], [(x, f(x)) for x in xs[9:]])
    for x in xs:
        n = sum(c * x ** i for i, c in enumerate(num))
        d = sum(c * x ** i for i, c in enumerate(den))
        assert n / d == f(x)
