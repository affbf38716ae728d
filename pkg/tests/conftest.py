import sympy
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from planedyn.algebra import QQ, PolyRing

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

X, Y, Z, T, W = sympy.symbols("x y z t w")

R2 = PolyRing(QQ, ("x", "y"))


def sym(p):
    """A Poly (or its text) as a sympy expression."""
    return sympy.sympify(str(p).replace("^", "**"))


def same(p, expr):
    return sympy.expand(sym(p) - expr) == 0


small_ints = st.integers(min_value=-4, max_value=4)


@st.composite
def polys(draw, ring=R2, max_deg=3, max_terms=5, nonzero=True):
    nv = ring.nvars
    terms = draw(st.lists(
        st.tuples(st.tuples(*[st.integers(0, max_deg)] * nv), small_ints),
        min_size=1 if nonzero else 0, max_size=max_terms))
    p = ring.zero
    for e, c in terms:
        if sum(e) <= max_deg:
            p = p + ring.monomial(e, c)
    if nonzero and p.is_zero():
        p = ring.one
    return p


# ------------------------------------------------- seeded curve-pair generators
def _line(rng):
    while True:
        a, b, c = (rng.randint(-3, 3) for _ in range(3))
        if a or b:
            return a, b, c


def _cross(l1, l2):
    a1, b1, c1 = l1
    a2, b2, c2 = l2
    return b1 * c2 - c1 * b2, c1 * a2 - a1 * c2, a1 * b2 - b1 * a2


def _proportional(l1, l2):
    return _cross(l1, l2) == (0, 0, 0)


def _line_text(l):
    a, b, c = l
    return f"({a}*x + {b}*y + {c}*z)"


def bezout_pair(rng):
    """Two coprime reduced curves (deg <= 4) whose intersections are all rational.

    Returns (g1, g2, points) with homogeneous equations and the projective
    intersection points as integer triples.  Either both curves are unions of
    lines, or the second is a graph y = p(x) cut by vertical lines.
    """
    if rng.random() < 0.6:
        n1, n2 = rng.randint(1, 4), rng.randint(1, 4)
        lines = []
        while len(lines) < n1 + n2:
            l = _line(rng)
            if not any(_proportional(l, m) for m in lines):
                lines.append(l)
        A, B = lines[:n1], lines[n1:]
        pts = {_normalize(_cross(l, m)) for l in A for m in B}
        return "*".join(map(_line_text, A)), "*".join(map(_line_text, B)), sorted(pts)
    d = rng.randint(1, 4)
    coeffs = [rng.randint(-3, 3) for _ in range(d)] + [rng.choice([-2, -1, 1, 2])]
    xs = rng.sample(range(-4, 5), rng.randint(1, 4))
    graph = f"y*z^{d - 1} - (" + " + ".join(f"{c}*x^{i}*z^{d - i}" for i, c in enumerate(coeffs)) + ")"
    verticals = "*".join(f"(x - {a}*z)" for a in xs)
    pts = {_normalize((a, sum(c * a ** i for i, c in enumerate(coeffs)), 1)) for a in xs}
    if d > 1:
        pts.add((0, 1, 0))
    return graph, verticals, sorted(pts)


def _normalize(p):
    from fractions import Fraction
    for c in p:
        if c:
            return tuple(Fraction(v, c) for v in p)
    raise ValueError("zero vector")


def local_pair(rng, max_deg=3, max_terms=4, coprime=False):
    """Two polynomials through the origin with integer coefficients."""
    from planedyn.algebra import gcd

    def one():
        while True:
            terms = []
            for _ in range(rng.randint(1, max_terms)):
                d = rng.randint(1, max_deg)
                i = rng.randint(0, d)
                terms.append(f"{rng.choice([-3, -2, -1, 1, 2, 3])}*x^{i}*y^{d - i}")
            p = R2(" + ".join(terms))
            if not p.is_zero():
                return p
    while True:
        f, g = one(), one()
        if not coprime or gcd(f, g).is_constant():
            return f, g


# --------------------------------------------------- brute-force line oracle
def _homogenize(expr, d):
    x, y, z = X, Y, Z
    return sympy.expand(z ** d * expr.subs({x: x / z, y: y / z}, simultaneous=True))


def brute_force_periodic_lines(P, Q, N):
    """All lines L (not the line at infinity) with L | L o F^k for some k <= N, solved by sympy.

    Returned as complex coefficient triples (a, b, c) of a*x + b*y + c*z, normalized so the
    first nonzero of a, b is 1.
    """
    from math import lcm
    k = lcm(*range(1, N + 1))
    p, q = sympy.sympify(P.replace("^", "**")), sympy.sympify(Q.replace("^", "**"))
    pk, qk = X, Y
    for _ in range(k):
        pk, qk = (sympy.expand(p.subs({X: pk, Y: qk}, simultaneous=True)),
                  sympy.expand(q.subs({X: pk, Y: qk}, simultaneous=True)))
    D = sympy.Poly(pk, X, Y).total_degree()
    Pk, Qk = _homogenize(pk, D), _homogenize(qk, D)
    b, c = sympy.symbols("b c")
    out = []
    # a = 1: x = -b*y - c*z
    comp = sympy.expand((Pk + b * Qk + c * Z ** D).subs(X, -b * Y - c * Z))
    for s in sympy.solve(sympy.Poly(comp, Y, Z).coeffs(), [b, c], dict=True):
        out.append((1, complex(s[b]), complex(s[c])))
    # a = 0, b = 1: y = -c*z
    comp = sympy.expand((Qk + c * Z ** D).subs(Y, -c * Z))
    for s in sympy.solve(sympy.Poly(comp, X, Z).coeffs(), [c], dict=True):
        out.append((0, 1, complex(s[c])))
    return out


def catalog_line_triples(catalog):
    """Catalog lines as complex triples normalized like the oracle (any root of the field modulus)."""
    out = []
    for C in catalog.curves():
        if C.degree != 1:
            continue
        field = C.field
        root = complex(field.complex_roots()[0]) if hasattr(field, "complex_roots") else None

        def value(c):
            if root is None:
                return complex(c)
            return sum(complex(a) * root ** i for i, a in enumerate(c.c))
        coeff = {e: value(c) for e, c in C.g.terms.items()}
        trip = [coeff.get((1, 0, 0), 0), coeff.get((0, 1, 0), 0), coeff.get((0, 0, 1), 0)]
        lead = trip[0] if abs(trip[0]) > 1e-12 else trip[1]
        out.append(tuple(v / lead for v in trip))
    return out


def same_triples(a, b, tol=1e-12):
    """Multiset equality of complex triples up to tol."""
    rest = list(b)
    for t in a:
        hit = next((s for s in rest if all(abs(u - v) < tol for u, v in zip(t, s))), None)
        if hit is None:
            return False
        rest.remove(hit)
    return not rest


# ------------------------------------------------------------------ acceptance report
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
