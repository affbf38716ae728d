"""Projective plane curves as reduced divisors, and their images under endomorphisms."""

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction

from .algebra import QQ, PolyRing, RatFunc, RationalFunctionField, canonical, gcd, resultant, squarefree_part
from .algebra import linalg, upoly
from .algebra.interp import interpolate, rational_reconstruction, specialize_poly
from .budget import BudgetExceeded, checkpoint, limits
from .endo import AFFINE, PROJECTIVE, affine_ring, projective_ring
from . import p1


class ProjCurve:
    """V(g) for a squarefree homogeneous g(x, y, z), stored canonically."""

    __slots__ = ("g",)

    def __init__(self, g):
        self.g = g

    @property
    def field(self):
        return self.g.ring.field

    @property
    def degree(self):
        return self.g.degree()

    @property
    def affine(self):
        return self.g.dehomogenize("z")

    def is_line_at_infinity(self):
        return self.g.variables() == ("z",)

    def contains_line_at_infinity(self):
        return all(e[2] > 0 for e in self.g.terms)

    def top_form(self):
        """g(x, y, 0) as a binary form in the affine ring."""
        ring = affine_ring(self.field)
        return self.g.compose({"x": ring.gen("x"), "y": ring.gen("y"), "z": ring.zero}, ring)

    def __eq__(self, other):
        return isinstance(other, ProjCurve) and self.g == other.g

    def __hash__(self):
        return hash(self.g)

    def __repr__(self):
        return f"V({self.g})"

    def text(self):
        return str(self.g)

    def affine_text(self):
        return str(self.affine)

    def record(self):
        return {"poly": str(self.g), "form": "homogeneous", "field": self.field.record()}

    def sort_key(self):
        return (self.degree, str(self.g))


def new_curve(g, form="affine", field=None, reduced=False):
    """Build a reduced curve from a polynomial or its text.

    ``form="affine"`` reads g(x, y) and homogenizes; ``form="homogeneous"``
    expects g(x, y, z) homogeneous.  Other variable names are renamed in
    order.  ``reduced=True`` skips the square-free reduction for input that
    is known to be square-free.
    """
    if form not in ("affine", "homogeneous"):
        raise ValueError(f"unknown curve form {form!r}")
    names = AFFINE if form == "affine" else PROJECTIVE
    if isinstance(g, str):
        g = PolyRing(field or QQ, names)(g)
    elif g.ring.vars != names:
        if g.ring.nvars != len(names):
            raise ValueError(f"{form} curves need {len(names)} variables, got {g.ring.vars}")
        target = PolyRing(g.ring.field, names)
        g = g.compose(dict(zip(g.ring.vars, target.gens())), target)
    if g.is_constant():
        raise ValueError("a constant does not define a curve")
    if form == "affine":
        g = g.homogenize("z")
    elif not g.is_homogeneous():
        raise ValueError(f"{g} is not homogeneous")
    return ProjCurve(canonical(g) if reduced else squarefree_part(g))


def line_at_infinity(field=QQ):
    return ProjCurve(projective_ring(field).gen("z"))


def digest(poly):
    return hashlib.sha256(str(poly).encode()).hexdigest()[:16]


# --------------------------------------------------------------- invariance
@dataclass(frozen=True)
class InvarianceCertificate:
    holds: bool
    period: int
    cofactor: object = None   # g o F^period = cofactor * g (homogeneous), when holds

    def __bool__(self):
        return self.holds


def pull_back(F, g, times=1):
    """g o F^times for homogeneous g (uses the homogenization (P~, Q~, z^d))."""
    sub = F.homogeneous_substitution()
    for _ in range(times):
        g = g.compose(sub, F.Ph.ring)
        checkpoint(len(g.terms))
    return g


def invariance_certificate(F, C, period=1):
    """Does g divide g o F^period?  Then F^period maps C into (hence onto) C."""
    if period < 1:
        raise ValueError("period must be positive")
    if C.is_line_at_infinity():
        raise ValueError("the line at infinity is totally invariant; nothing to certify")
    g = _over(C.g, F.field)
    h = pull_back(F, g, period)
    q, r = h.divmod(g)
    if r.terms:
        return InvarianceCertificate(False, period)
    return InvarianceCertificate(True, period, q)


def _over(g, field):
    if g.ring.field == field:
        return g
    return g.change_ring(g.ring.with_field(field))


# -------------------------------------------------------------- pushforward
class ContractedCurve(RuntimeError):
    """No image polynomial up to the degree bound; impossible for a finite map."""


@dataclass(frozen=True)
class PushforwardCertificate:
    """h(P, Q) = cofactor * g on the affine chart, h of minimal degree.

    ``delta`` is the degree of F restricted to C, counted from generic
    fibres (None for a reducible C whose components disagree); ``candidate`` is the elimination polynomial when it was computed.
    """

    source: ProjCurve
    image: ProjCurve
    delta: int
    map_degree: int
    cofactor: object
    candidate: object = None

    def degree_formula_holds(self):
        return self.delta is not None and self.delta * self.image.degree == self.map_degree * self.source.degree

    def verify(self, F):
        g = self.source.affine
        h = self.image.affine
        lhs = h.compose(F.substitution(), F.ring)
        return lhs == self.cofactor * _over(g, F.field)

    def record(self):
        return {
            "source": self.source.text(),
            "image": self.image.text(),
            "delta": self.delta,
            "cofactor_digest": digest(self.cofactor),
        }


def _elimination_candidate(F, g):
    """Squarefree gcd of the eliminants in the two variable orders, or None."""
    field = F.field
    R = PolyRing(field, ("x", "y", "u", "v"))
    G = g.change_ring(R)
    sub = {"x": R.gen("x"), "y": R.gen("y")}
    U = R.gen("u") - F.P.compose(sub, R)
    V = R.gen("v") - F.Q.compose(sub, R)
    out = []
    for first, second in (("y", "x"), ("x", "y")):
        if G.degree_in(first) < 1:
            continue
        r1 = resultant(G, U, first)
        r2 = resultant(G, V, first)
        E = resultant(r1, r2, second)
        if E.terms and not E.is_constant():
            out.append(E)
    if not out:
        return None
    H = out[0]
    for E in out[1:]:
        H = gcd(H, E)
    if H.is_constant():
        return None
    target = affine_ring(field)
    H = H.compose({"x": target.zero, "y": target.zero, "u": target.gen("x"), "v": target.gen("y")}, target)
    return squarefree_part(H)


def _monomials(k):
    return [(i, j - i) for j in range(k + 1) for i in range(j, -1, -1)]


class _Normalforms:
    """Normal forms of P^i Q^j modulo g, built incrementally and cached."""

    def __init__(self, F, g):
        self.g = g
        self.P = F.P.divmod(g)[1]
        self.Q = F.Q.divmod(g)[1]
        self.table = {(0, 0): F.ring.one}

    def __call__(self, i, j):
        key = (i, j)
        val = self.table.get(key)
        if val is None:
            if i > 0:
                val = (self.P * self(i - 1, j)).divmod(self.g)[1]
            else:
                val = (self.Q * self(i, j - 1)).divmod(self.g)[1]
            self.table[key] = val
        return val


def _kernel_at(nf, k, field):
    """Basis of {h of degree <= k : h(P, Q) = 0 mod g} as coefficient vectors."""
    monos = _monomials(k)
    col_index = {}
    cols = {}
    for idx, (i, j) in enumerate(monos):
        for e, c in nf(i, j).terms.items():
            if e not in col_index:
                col_index[e] = len(col_index)
            cols.setdefault(col_index[e], {})[idx] = c
    checkpoint(len(cols) * len(monos))
    return monos, linalg.nullspace(list(cols.values()), len(monos), field)


def _poly_from_vector(ring, monos, v):
    return ring.zero + sum((ring.monomial(e, c) for e, c in zip(monos, v) if c != 0), ring.zero)


def _image_by_kernel(F, g, max_degree, start=1):
    """Least-degree h with h(P, Q) = 0 mod g, by exact linear algebra."""
    nf = _Normalforms(F, g)
    for k in range(start, max_degree + 1):
        monos, basis = _kernel_at(nf, k, F.field)
        if basis:
            if len(basis) > 1:
                raise RuntimeError("image kernel is not one-dimensional at the least degree")
            return canonical(_poly_from_vector(F.ring, monos, basis[0]))
    return None


# ---------------------------------------------- images over a function field
def _specialize_map(F, t0):
    from .endo import Endomorphism, check_regular, NotRegular

    ring = affine_ring(QQ)
    P, Q = specialize_poly(F.P, t0, ring), specialize_poly(F.Q, t0, ring)
    if max(P.degree(), Q.degree()) != F.degree:
        return None
    G = Endomorphism(P, Q)
    try:
        check_regular(G)
    except NotRegular:
        return None
    return G


def _good_samples(F, g, start=1):
    """Parameter values where F and g specialize without degeneration."""
    lead = g.leading_term()[0]
    t0 = start
    while True:
        t = Fraction(t0)
        t0 += 1
        try:
            G = _specialize_map(F, t)
            g0 = specialize_poly(g, t, affine_ring(QQ))
        except ZeroDivisionError:
            continue
        if G is None or g0.leading_term()[0] != lead:
            continue
        if squarefree_part(g0).degree() != g0.degree():
            continue
        yield t, G, g0


def _lift(p, ring3):
    """Polynomial coefficients in Q[t] -> a polynomial over Q in (x, y, t)."""
    out = {}
    for e, c in p.terms.items():
        if c.den != (Fraction(1),):
            raise ValueError("coefficient is not a polynomial in the parameter")
        for k, a in enumerate(c.num):
            if a:
                out[e + (k,)] = a
    return type(p)(ring3, out)


def _clear(p):
    """(polynomial part, denominator) with p = part / den, den in Q[t]."""
    field = p.ring.field
    den = (Fraction(1),)
    for c in p.terms.values():
        den = upoly.divmod_(upoly.mul(den, c.den), upoly.gcd_(den, c.den))[0]
    D = RatFunc.make(field, den, (Fraction(1),))
    return p.scale(D), D


def _certify_over_function_field(F, g, h):
    """Exact check that g divides h(P, Q), done in Q[x, y, t] (Gauss's lemma)."""
    field = F.field
    ring3 = PolyRing(QQ, ("x", "y", field.var))
    Ph, DP = _clear(F.P)
    Qh, DQ = _clear(F.Q)
    k = h.degree()
    P3, Q3, G3 = _lift(Ph, ring3), _lift(Qh, ring3), _lift(canonical(g), ring3)
    dp = _lift(F.ring.const(DP), ring3)
    dq = _lift(F.ring.const(DQ), ring3)
    H = ring3.zero
    for e, c in h.terms.items():
        i, j = e
        H = H + _lift(F.ring.const(c), ring3) * P3 ** i * Q3 ** j * dp ** (k - i) * dq ** (k - j)
        checkpoint(len(H.terms))
    q, r = H.divmod(G3)
    if r.terms:
        return None
    # back to Q(t)[x, y], undoing the cleared denominators and g's normalization
    out = {}
    for e, c in q.terms.items():
        key = e[:2]
        out.setdefault(key, [Fraction(0)] * (e[2] + 1))
        row = out[key]
        if len(row) <= e[2]:
            row.extend([Fraction(0)] * (e[2] + 1 - len(row)))
        row[e[2]] += c
    qq = F.ring.zero + sum((F.ring.monomial(e, field.from_polys(cs)) for e, cs in out.items()), F.ring.zero)
    scale = canonical(g).terms[g.leading_term()[0]] / g.terms[g.leading_term()[0]]
    return qq.scale(scale / (DP ** k * DQ ** k))


def _reconstruct(F, points, need):
    """Rebuild h over Q(t) from normalized kernel vectors at sample parameters.

    A random combination of the coefficients gives the common denominator
    by rational reconstruction; the numerators are then plain interpolants.
    Extra sample points beyond ``need`` serve as checks.
    """
    field = F.field
    rng = random.Random(len(points))
    monos = sorted(points[0][1])
    weights = {e: rng.randint(1, 97) for e in monos}
    xs = [t for t, _ in points[:need]]
    checks = points[need:]
    combo = [sum(weights[e] * v[e] for e in monos) for _, v in points]
    rec = rational_reconstruction(xs, combo[:need], list(zip([t for t, _ in checks], combo[need:])))
    if rec is None:
        return None
    den = rec[1]
    # each numerator has degree at most that of the combination, generically
    m = upoly.deg(rec[0]) + 1
    h = F.ring.zero
    for e in monos:
        ys = [v[e] * upoly.evaluate(den, t) for t, v in points[:m]]
        num = interpolate(xs[:m], ys)
        for t, v in points[m:]:
            if upoly.evaluate(num, t) != v[e] * upoly.evaluate(den, t):
                return None
        if num:
            h = h + F.ring.monomial(e, RatFunc.make(field, num, den))
    return canonical(h)


def _image_over_function_field(F, g, bound):
    samples = _good_samples(F, g)
    k = 0
    for _ in range(3):
        _, G0, g0 = next(samples)
        h0 = _image_by_kernel(G0, g0, bound)
        if h0 is None:
            raise ContractedCurve("a specialization has no image polynomial")
        k = max(k, h0.degree())
    pivot = None
    points = []
    need = 8
    witness = None
    while need <= 1024:
        while len(points) < need + 3:
            t, G0, g0 = next(samples)
            nf = _Normalforms(G0, g0)
            monos, basis = _kernel_at(nf, k, QQ)
            if len(basis) != 1:
                continue
            lower = _image_by_kernel(G0, g0, k - 1) if k > 1 and not points else None
            if lower is not None:
                continue
            vec = dict(zip(monos, basis[0]))
            if pivot is None:
                pivot = max(e for e, c in vec.items() if c != 0)
            if vec[pivot] == 0:
                continue
            points.append((t, {e: c / vec[pivot] for e, c in vec.items()}))
            witness = (G0, g0)
        h = _reconstruct(F, points, need)
        if h is not None:
            cof = _certify_over_function_field(F, g, h)
            if cof is not None:
                return h, cof, witness
        need += need // 4
    raise BudgetExceeded("parameter reconstruction of the image did not converge")


def _shear(p, lam):
    ring = p.ring
    x, y = ring.gens()
    return p.compose({"x": x + y * lam, "y": y}, ring)


def distinct_common_zeros(a, b, shears=(1, 2, 3)):
    """Number of distinct common zeros in the affine plane (over the closure).

    Counts distinct roots of Res_y after a shear that makes the
    y-leading coefficient of ``a`` constant; the maximum over several shears
    is taken so that collisions of x-coordinates are avoided.
    """
    best = 0
    for lam in shears:
        A, B = _shear(a, lam), _shear(b, lam)
        if not A.lc_in("y").is_constant():
            continue
        R = resultant(A, B, "y")
        if not R.terms:
            raise ValueError("curves share a component")
        if R.is_constant():
            n = 0
        else:
            n = R.degree() - gcd(R, R.derivative("x")).degree()
        best = max(best, n)
    return best


def _fibre_degree(F, g, h, seed=0):
    """deg F|_C as (#C meets F^-1(L)) / (#F(C) meets L) for a generic line L.

    None when C is reducible and its components map with different degrees,
    which shows up as a non-integral ratio of the generic counts.
    """
    rng = random.Random(seed)
    ring = F.ring
    expected = F.degree * g.degree()
    last = None
    for _ in range(6):
        a, b, c = (rng.randint(-7, 7) for _ in range(3))
        if a == 0 and b == 0:
            continue
        L = ring.const(c) + ring.gen("x") * a + ring.gen("y") * b
        pulled = F.P * a + F.Q * b + c
        n_source = distinct_common_zeros(g, pulled)
        n_image = distinct_common_zeros(h, L)
        last = (n_source, n_image)
        if n_source == expected and n_image == h.degree() and n_image:
            return n_source // n_image if n_source % n_image == 0 else None
    raise RuntimeError(f"generic fibre count did not stabilize (last counts {last})")


def pushforward_image(F, C, use_elimination=None):
    """Certified reduced image F(C) with the degree of F on C."""
    if C.contains_line_at_infinity():
        raise ValueError("pushforward of a curve containing the line at infinity")
    g = _over(C.affine, F.field)
    bound = F.degree * g.degree()
    if isinstance(F.field, RationalFunctionField):
        # exact linear algebra over Q(t) is slow; interpolate from
        # specializations and certify the result symbolically
        h, cofactor, (G0, g0) = _image_over_function_field(F, g, bound)
        h0 = _image_by_kernel(G0, g0, h.degree())
        delta = _fibre_degree(G0, g0, h0)
        return PushforwardCertificate(C, new_curve(h, "affine", reduced=True), delta, F.degree, cofactor, None)
    H = None
    if use_elimination is None:
        use_elimination = bound <= 6
    if use_elimination:
        try:
            with limits(seconds=2.0, max_work=2_000_000):
                H = _elimination_candidate(F, g)
        except BudgetExceeded:
            checkpoint(0)
            H = None
    h = _image_by_kernel(F, g, H.degree() if H is not None else bound)
    if h is None:
        raise ContractedCurve(f"no image polynomial of degree <= {bound} for {C}")
    if H is not None and H.divmod(h)[1].terms:
        raise RuntimeError(f"certified image {h} does not divide the eliminant {H}")
    cofactor = h.compose(F.substitution(), F.ring).exact_div(g)
    delta = _fibre_degree(F, g, h)
    image = new_curve(h, "affine", reduced=True)
    return PushforwardCertificate(C, image, delta, F.degree, cofactor, H)


# ---------------------------------------------------------------- infinity
@dataclass(frozen=True)
class InfinityPoint:
    point: tuple            # normalized [X : Y] in the chart t = y/x
    multiplicity: int

    def text(self):
        return p1.point_text(self.point)


def infinity_points(C, candidates=()):
    """Points of C on z = 0 with the local intersection number with the line.

    The restriction of g to z = 0 is the top form; the intersection number
    at a point equals the multiplicity of the corresponding root.
    Irrational points come back as :class:`planedyn.p1.Packet` values.
    """
    if C.is_line_at_infinity():
        raise ValueError("the line at infinity meets itself in a line")
    form = C.top_form()
    if not form.terms:
        raise ValueError("curve contains the line at infinity")
    pts, packets = p1.binary_roots(form, candidates)
    return [InfinityPoint(pt, m) for pt, m in pts], packets
