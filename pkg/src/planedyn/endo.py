"""Regular polynomial endomorphisms of the plane and their action at infinity.

An :class:`Endomorphism` is a pair (P, Q) in the affine coordinates x, y
whose degree-d leading forms have no common projective zero, so that the
map extends to P^2 (homogenizing with z) and preserves the line at
infinity z = 0.  Input variables may carry any two names; they are renamed
to x, y on construction.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .algebra import QQ, NumberField, PolyRing, ZeroDivisorSplit, canonical, gcd
from .algebra import linalg, upoly
from .algebra.roots import rational_roots_and_packets
from .budget import BudgetExceeded, checkpoint, term_limit

AFFINE = ("x", "y")
PROJECTIVE = ("x", "y", "z")


class NotRegular(ValueError):
    """The leading forms share a projective zero (or the degree is < 2)."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def affine_ring(field=QQ):
    return PolyRing(field, AFFINE)


def projective_ring(field=QQ):
    return PolyRing(field, PROJECTIVE)


def binary_form_coeffs(form, d):
    """[a_0..a_d] with form = sum a_i x^(d-i) y^i."""
    f = form.ring.field
    out = [f.zero] * (d + 1)
    for e, c in form.terms.items():
        out[e[1]] = c
    return out


def binary_resultant(a, b, d):
    """Resultant of two binary forms of formal degree d (Sylvester determinant)."""
    field = a.ring.field
    ca = binary_form_coeffs(a, d)
    cb = binary_form_coeffs(b, d)
    n = 2 * d
    rows = []
    for i in range(d):
        rows.append([field.zero] * i + ca + [field.zero] * (d - 1 - i))
    for i in range(d):
        rows.append([field.zero] * i + cb + [field.zero] * (d - 1 - i))
    assert all(len(r) == n for r in rows)
    return linalg.determinant(rows, field)


def binary_form_roots(form):
    """Rational zeros of a binary form over Q, as normalized [x:y] pairs, plus packets."""
    d = form.degree()
    if d <= 0:
        return [], []
    pts = []
    c = binary_form_coeffs(form, d)
    # zeros [1:t] come from form(1, t); [0:1] when the y^d coefficient vanishes
    t_poly = upoly.trim(tuple(Fraction(v) for v in c))
    if c[d] == 0:
        pts.append((Fraction(0), Fraction(1)))
    if upoly.deg(t_poly) < 1:
        return pts, []
    roots, packets = rational_roots_and_packets(t_poly)
    pts.extend((Fraction(1), r) for r, _ in roots)
    return pts, packets


@dataclass(frozen=True, eq=False)
class InfinityMap:
    """The restriction f = F|H_inf as a pair of binary forms [A : B] on P^1.

    In the chart t = y/x, f(t) = B(1, t) / A(1, t); at infinity use the
    swapped chart s = x/y, where s -> A(s, 1) / B(s, 1).
    """

    A: object
    B: object

    @property
    def field(self):
        return self.A.ring.field

    @property
    def degree(self):
        return max(self.A.degree(), self.B.degree())

    @property
    def ring(self):
        return self.A.ring

    def normalized(self):
        lead = self.A if self.A.terms else self.B
        c = lead.lex_leading_term()[1]
        return (self.A.scale(1 / c), self.B.scale(1 / c))

    def __eq__(self, other):
        return isinstance(other, InfinityMap) and self.normalized() == other.normalized()

    def __hash__(self):
        return hash(self.normalized())

    def compose(self, other):
        """self o other."""
        sub = {"x": other.A, "y": other.B}
        return InfinityMap(self.A.compose(sub), self.B.compose(sub))

    def iterate(self, n):
        out = self
        for _ in range(n - 1):
            out = self.compose(out)
        return out

    def chart_var(self):
        return "u" if self.field.var == "t" else "t"

    def rational_function(self):
        """(numerator, denominator) of f(t) in lowest terms, over a 1-variable ring."""
        v = self.chart_var()
        ring = PolyRing(self.field, (v,))
        t = ring.gen(v)
        sub = {"x": ring.one, "y": t}
        num = self.B.compose(sub, ring)
        den = self.A.compose(sub, ring)
        g = gcd(num, den)
        if not g.is_constant():
            num, den = num.exact_div(g), den.exact_div(g)
        c = den.lex_leading_term()[1]
        return num.scale(1 / c), den.scale(1 / c)

    def swapped_function(self):
        """Chart at infinity: s -> A(s, 1) / B(s, 1) with s = x/y."""
        return InfinityMap(self.B.compose({"x": self.ring.gen("y"), "y": self.ring.gen("x")}),
                           self.A.compose({"x": self.ring.gen("y"), "y": self.ring.gen("x")})).rational_function()

    def text(self):
        num, den = self.rational_function()
        if den == 1:
            return str(num)
        return f"({num})/({den})"

    def __call__(self, point):
        """Image of a projective point [X : Y], normalized to [1 : t] or [0 : 1]."""
        X, Y = point
        a = self.A.evaluate({"x": X, "y": Y})
        b = self.B.evaluate({"x": X, "y": Y})
        return normalize_p1(a, b)

    def fixed_point_form(self, n=1):
        """x*B_n - y*A_n, whose zeros are the fixed points of f^n."""
        g = self.iterate(n)
        x, y = self.ring.gens()
        return x * g.B - y * g.A

    def change_field(self, field):
        ring = self.ring.with_field(field)
        return InfinityMap(self.A.change_ring(ring), self.B.change_ring(ring))

    @classmethod
    def from_rational(cls, num, den=None, field=QQ):
        """Build from f(t) = num(t)/den(t) given as coefficient lists (low -> high) or text."""
        from .algebra.parse import parse_poly

        ring = affine_ring(field)
        v = "u" if field.var == "t" else "t"
        r1 = PolyRing(field, (v,))
        if isinstance(num, str):
            num = parse_poly(num, r1)
        else:
            num = _from_coeffs(r1, num)
        if den is None:
            den = r1.one
        elif isinstance(den, str):
            den = parse_poly(den, r1)
        else:
            den = _from_coeffs(r1, den)
        d = max(num.degree(), den.degree())

        def hom(p):
            return ring.zero + sum((ring.monomial((d - e[0], e[0]), c) for e, c in p.terms.items()), ring.zero)

        return cls(hom(den), hom(num))


def _from_coeffs(ring, coeffs):
    return sum((ring.monomial((i,), c) for i, c in enumerate(coeffs) if c != 0), ring.zero)


def normalize_p1(a, b):
    if a == 0 and b == 0:
        raise ZeroDivisionError("[0:0] is not a point of P^1")
    if a == 0:
        return (a * 0, b / b)
    return (a / a, b / a)


@dataclass(frozen=True, eq=False)
class Endomorphism:
    """A verified regular polynomial endomorphism (P, Q) of degree d >= 2."""

    P: object
    Q: object
    degree: int = dc_field(init=False)
    Ph: object = dc_field(init=False)
    Qh: object = dc_field(init=False)

    def __post_init__(self):
        d = max(self.P.degree(), self.Q.degree())
        object.__setattr__(self, "degree", d)
        object.__setattr__(self, "Ph", self.P.homogenize("z", d))
        object.__setattr__(self, "Qh", self.Q.homogenize("z", d))

    @property
    def field(self):
        return self.P.ring.field

    @property
    def ring(self):
        return self.P.ring

    def __eq__(self, other):
        return isinstance(other, Endomorphism) and self.P == other.P and self.Q == other.Q

    def __hash__(self):
        return hash((self.P, self.Q))

    def __repr__(self):
        return f"Endomorphism({self.P}, {self.Q})"

    def leading_forms(self):
        d = self.degree
        return self.P.homogeneous_part(d), self.Q.homogeneous_part(d)

    def substitution(self):
        return {"x": self.P, "y": self.Q}

    def homogeneous_substitution(self):
        z = self.Ph.ring.gen("z")
        return {"x": self.Ph, "y": self.Qh, "z": z ** self.degree}

    def __call__(self, point):
        x0, y0 = point
        return (self.P.evaluate({"x": x0, "y": y0}), self.Q.evaluate({"x": x0, "y": y0}))

    def compose(self, other):
        """self o other (apply ``other`` first)."""
        sub = other.substitution()
        return Endomorphism(self.P.compose(sub, other.ring), self.Q.compose(sub, other.ring))

    def change_field(self, field):
        ring = self.ring.with_field(field)
        return Endomorphism(self.P.change_ring(ring), self.Q.change_ring(ring))

    def text(self):
        return f"({self.P}, {self.Q})"


def new_endomorphism(P, Q, field=None):
    """Verify regularity and build an :class:`Endomorphism`.

    ``P`` and ``Q`` are polynomials in one common two-variable ring (any
    names; they are renamed to x, y) or text over ``field`` in x, y.
    """
    if isinstance(P, str) or isinstance(Q, str):
        ring = affine_ring(field or QQ)
        P, Q = ring(P), ring(Q)
    if P.ring != Q.ring:
        raise TypeError("P and Q must live in the same ring")
    if P.ring.nvars != 2:
        raise ValueError(f"endomorphisms of the plane need two variables, got {P.ring.vars}")
    if P.ring.vars != AFFINE:
        target = affine_ring(P.ring.field)
        ren = dict(zip(P.ring.vars, target.gens()))
        P, Q = P.compose(ren, target), Q.compose(ren, target)
    d = max(P.degree(), Q.degree())
    if d < 2:
        raise NotRegular(f"degree {d} < 2")
    F = Endomorphism(P, Q)
    check_regular(F)
    return F


def check_regular(F):
    Pd, Qd = F.leading_forms()
    if binary_resultant(Pd, Qd, F.degree) != 0:
        return
    if not Pd.terms or not Qd.terms:
        raise NotRegular("a leading form vanishes identically", witness="all")
    g = gcd(Pd, Qd)
    witness = None
    if F.field == QQ:
        pts, packets = binary_form_roots(g)
        if pts:
            witness = pts[0]
        elif packets:
            witness = {"packet": upoly.to_text(packets[0][0], "t")}
    raise NotRegular(f"leading forms share the factor {g}", witness=witness)


def iterate(F, n):
    """F^n by exact composition; a term budget turns blow-up into BudgetExceeded."""
    if n < 1:
        raise ValueError("iterate needs n >= 1")
    out = F
    limit = term_limit()
    for k in range(2, n + 1):
        try:
            out = F.compose(out)
        except BudgetExceeded as exc:
            raise BudgetExceeded(f"iterate stopped at degree {out.degree}: {exc}", partial=out.degree) from None
        if limit is not None and len(out.P.terms) + len(out.Q.terms) > limit:
            raise BudgetExceeded(f"iterate exceeded {limit} terms at step {k}", partial=out.degree)
        checkpoint()
    return out


def restrict_infinity(F):
    Pd, Qd = F.leading_forms()
    return InfinityMap(Pd, Qd)


def commutes_with(F, G):
    return F.compose(G) == G.compose(F)


# ------------------------------------------------------------ classification
@dataclass(frozen=True)
class Verdict:
    """Outcome of a coordinate search.

    ``holds`` is the answer over the base field.  ``scope`` is
    "base-field" (witness over the base field), "extension" (a witness
    exists only over the recorded number field), or "none" (every
    candidate over the algebraic closure was checked and failed).
    """

    holds: bool
    scope: str
    witness: object = None
    note: str = ""

    def __bool__(self):
        return self.holds


def _skew_candidate(F, alpha, beta):
    """Is alpha*P + beta*Q a polynomial in alpha*x + beta*y?"""
    ring = F.ring
    h = F.P * alpha + F.Q * beta
    x, y = ring.gens()
    L = ring.gen("x")
    if alpha != 0:
        sub = {"x": (L - y * beta) * (1 / alpha), "y": y}
        free = "y"
    else:
        sub = {"x": x, "y": (ring.gen("y") - x * alpha) * (1 / beta)}
        free = "x"
    g = h.compose(sub, ring)
    return g.degree_in(free) <= 0, g


def _fixed_points_exact(f):
    """Rational fixed points of f and packets (modulus polynomials in t)."""
    form = f.fixed_point_form(1)
    return binary_form_roots(form)


def is_skew_product(F):
    """Search for a linear form l with l o F a polynomial in l.

    Candidates are the fixed points of F on the line at infinity; each is
    tested exactly, packets inside their own number field.
    """
    if F.field != QQ:
        return _is_skew_over(F, F.field)
    f = restrict_infinity(F)
    pts, packets = _fixed_points_exact(f)
    for X, Y in pts:
        alpha, beta = Y, -X
        ok, g = _skew_candidate(F, alpha, beta)
        if ok:
            w = F.ring.gen("x") * alpha + F.ring.gen("y") * beta
            return Verdict(True, "base-field", witness=canonical(w), note=f"l o F = {g} in l = {canonical(w)}")
    for modulus, _ in packets:
        v = _skew_over_packet(F, modulus)
        if v is not None:
            return v
    return Verdict(False, "none", note="no fixed point at infinity yields an invariant pencil")


def _is_skew_over(F, field):
    f = restrict_infinity(F)
    form = f.fixed_point_form(1)
    cands = []
    c = binary_form_coeffs(form, form.degree())
    if c[-1] == 0:
        cands.append((field.zero, field.one))
    # linear factors only over a non-rational base field
    for X, Y in _linear_roots_binary(form):
        cands.append((X, Y))
    for X, Y in cands:
        ok, g = _skew_candidate(F, Y, -X)
        if ok:
            w = F.ring.gen("x") * Y - F.ring.gen("y") * X
            return Verdict(True, "base-field", witness=canonical(w))
    return Verdict(False, "none", note=f"checked {len(cands)} base-field candidates; packets over {field} not searched")


def _linear_roots_binary(form):
    """Roots [1:t] of a binary form over an arbitrary field that show up as linear gcd factors."""
    out = []
    d = form.degree()
    c = binary_form_coeffs(form, d)
    field = form.ring.field
    # roots t of sum c_i t^i; probe rational candidates via the derivative trick is not
    # available in general, so use t = -c_{k-1}/c_k when the polynomial is linear
    coeffs = list(c)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) == 2:
        out.append((field.one, -coeffs[0] / coeffs[1]))
    return out


def _skew_over_packet(F, modulus, depth=0):
    K = NumberField(modulus, "w")
    try:
        Fk = F.change_field(K)
        a = K.gen()
        ok, g = _skew_candidate(Fk, a, K.one * -1)
    except ZeroDivisorSplit as exc:
        if depth > 4:
            raise
        q = exc.factor
        other = upoly.divmod_(modulus, q)[0]
        return _skew_over_packet(F, q, depth + 1) or _skew_over_packet(F, other, depth + 1)
    if ok:
        w = Fk.ring.gen("x") * a - Fk.ring.gen("y")
        return Verdict(False, "extension", witness=canonical(w),
                       note=f"skew only after a change of coordinates over {K}")
    return None


def is_homogeneous(F):
    """Is F conjugate by a translation to a homogeneous map of degree d?

    The translation c must kill the degree d-1 part of F(X + c), which is
    linear in c; the system is solved exactly, so the verdict is proven.
    """
    d = F.degree
    field = F.field
    ring = F.ring
    rows, rhs = [], []
    for comp in (F.P, F.Q):
        low = comp.homogeneous_part(d - 1)
        top = comp.homogeneous_part(d)
        gx, gy = top.derivative("x"), top.derivative("y")
        monos = set(low.terms) | set(gx.terms) | set(gy.terms)
        for e in sorted(monos):
            row = {}
            if gx.coefficient(e) != 0:
                row[0] = gx.coefficient(e)
            if gy.coefficient(e) != 0:
                row[1] = gy.coefficient(e)
            rows.append(row)
            rhs.append(-low.coefficient(e))
    sol = linalg.solve(rows, rhs, 2, field)
    if sol is None:
        return Verdict(False, "none", note="no translation removes the degree d-1 part")
    a, b = sol
    x, y = ring.gens()
    shifted = {"x": x + a, "y": y + b}
    G = (F.P.compose(shifted) - a, F.Q.compose(shifted) - b)
    if all(g.is_homogeneous() and (g.degree() == d or not g.terms) for g in G):
        return Verdict(True, "base-field", witness=(a, b), note=f"conjugate to ({G[0]}, {G[1]})")
    return Verdict(False, "none", note="the unique candidate translation leaves lower-order terms")


# ------------------------------------------------------------ semiconjugacy
class RationalPair:
    """A rational map (n1/d1, n2/d2) of the plane, kept as raw numerators/denominators."""

    def __init__(self, n1, d1, n2, d2):
        for d in (d1, d2):
            if not d.terms:
                raise ZeroDivisionError("identically zero denominator")
        self.n1, self.d1, self.n2, self.d2 = n1, d1, n2, d2

    @classmethod
    def from_polys(cls, P, Q):
        return cls(P, P.ring.one, Q, Q.ring.one)

    @classmethod
    def from_text(cls, first, second, field=QQ):
        ring = affine_ring(field)
        return cls(*_split_fraction(first, ring), *_split_fraction(second, ring))


def _split_fraction(text, ring):
    """Parse 'num' or 'num / den' where both sides are polynomials in x, y."""
    if isinstance(text, tuple):
        n, d = text
        return ring(n), ring(d)
    depth = 0
    for i in range(len(text) - 1, -1, -1):
        ch = text[i]
        if ch == ")":
            depth += 1
        elif ch == "(":
            depth -= 1
        elif ch == "/" and depth == 0:
            num, den = text[:i], text[i + 1:]
            try:
                return ring(num), ring(den)
            except ValueError:
                break
    return ring(text), ring.one


def _poly_at_rational(P, pair):
    """P(n1/d1, n2/d2) as (numerator, denominator)."""
    a = P.degree_in("x")
    b = P.degree_in("y")
    ring = pair.n1.ring
    num = ring.zero
    pw = {}

    def power(base, k):
        key = (id(base), k)
        if key not in pw:
            pw[key] = base ** k
        return pw[key]

    for e, c in P.terms.items():
        i, j = e
        term = power(pair.n1, i) * power(pair.d1, a - i) * power(pair.n2, j) * power(pair.d2, b - j)
        num = num + term.scale(ring.field.convert(c))
    den = power(pair.d1, a) * power(pair.d2, b)
    return num, den


def compose_rational(outer, inner):
    """outer o inner for RationalPairs."""
    n1, d1 = _poly_at_rational(outer.n1, inner)
    e1, f1 = _poly_at_rational(outer.d1, inner)
    n2, d2 = _poly_at_rational(outer.n2, inner)
    e2, f2 = _poly_at_rational(outer.d2, inner)
    first = (n1 * f1, d1 * e1)
    second = (n2 * f2, d2 * e2)
    if not first[1].terms or not second[1].terms:
        raise ZeroDivisionError("composition has an identically zero denominator")
    return RationalPair(first[0], first[1], second[0], second[1])


def rational_equal(p, q):
    return p.n1 * q.d1 == q.n1 * p.d1 and p.n2 * q.d2 == q.n2 * p.d2


def _as_pair(obj):
    if isinstance(obj, RationalPair):
        return obj
    if isinstance(obj, Endomorphism):
        return RationalPair.from_polys(obj.P, obj.Q)
    if isinstance(obj, tuple) and len(obj) == 2:
        return RationalPair.from_polys(*obj)
    raise TypeError(f"cannot read {obj!r} as a rational map")


def check_semiconjugacy(mu, G, F):
    """Exact test of mu o G == F o mu after cross-multiplication."""
    mu = _as_pair(mu)
    lhs = compose_rational(mu, _as_pair(G))
    rhs = compose_rational(_as_pair(F), mu)
    return rational_equal(lhs, rhs)
