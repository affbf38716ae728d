"""Local geometry of plane curves: intersection numbers, blow-ups, resolution trees.

Local computations translate the point to the origin of an affine chart.
Points with irrational coordinates live over a :class:`NumberField`; a
conjugate packet is handled through one root over the field it generates,
with totals multiplied by the packet degree.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
import warnings

from .algebra import QQ, NumberField, PolyRing, ZeroDivisorSplit, gcd, resultant
from .algebra import linalg, upoly
from .budget import checkpoint
from . import p1

LOCAL = ("x", "y")


class InfiniteMultiplicity(ArithmeticError):
    """The curves share a component through the point."""


class TreeTruncated(RuntimeError):
    """A resolution tree was cut short before the requested depth."""


# ------------------------------------------------------------------ points
@dataclass(frozen=True)
class PlanePoint:
    """A point in one of the standard affine charts of P^2.

    ``chart="z"`` means coordinates (x, y) with z = 1; ``"x"`` means (y, z)
    with x = 1; ``"y"`` means (x, z) with y = 1.
    """

    coords: tuple
    chart: str = "z"

    def __post_init__(self):
        if self.chart not in ("x", "y", "z"):
            raise ValueError(f"unknown chart {self.chart!r}")
        if len(self.coords) != 2:
            raise ValueError("a plane point has two coordinates")

    @classmethod
    def from_projective(cls, X, Y, Z):
        if Z != 0:
            return cls((X / Z if not isinstance(X, int) else Fraction(X) / Z, Fraction(Y) / Z if isinstance(Y, int) else Y / Z), "z")
        if X != 0:
            return cls((Fraction(Y) / X if isinstance(Y, int) else Y / X, Fraction(0) if isinstance(Z, int) else Z * 0), "x")
        if Y != 0:
            return cls((Fraction(X) if isinstance(X, int) else X, Fraction(0) if isinstance(Z, int) else Z), "y")
        raise ValueError("[0:0:0] is not a point")

    @property
    def field(self):
        for c in self.coords:
            if not isinstance(c, (int, Fraction)):
                return c.field
        return QQ

    def text(self):
        a, b = self.coords
        if self.chart == "z":
            return f"[{a}:{b}:1]"
        if self.chart == "x":
            return f"[1:{a}:{b}]"
        return f"[{a}:1:{b}]"


ORIGIN = PlanePoint((Fraction(0), Fraction(0)))


def _chart_vars(chart):
    return {"z": ("x", "y", "z"), "x": ("y", "z", "x"), "y": ("x", "z", "y")}[chart]


def local_equation(C, p):
    """The equation of C near p, translated so that p is the origin of (x, y)."""
    g = C.g if hasattr(C, "g") else C
    field = p.field if p.field != QQ else g.ring.field
    if g.ring.field != field:
        g = g.change_ring(g.ring.with_field(field))
    a_name, b_name, one_name = _chart_vars(p.chart)
    ring = PolyRing(field, LOCAL)
    x, y = ring.gens()
    a, b = p.coords
    sub = {a_name: x + a, b_name: y + b, one_name: ring.one}
    return g.compose(sub, ring)


def local_affine(f, p):
    """Translate an affine polynomial in (x, y) so that the point p = (a, b) becomes the origin."""
    a, b = p
    field = f.ring.field
    for c in (a, b):
        if not isinstance(c, (int, Fraction)) and c.field != field:
            field = c.field
            f = f.change_ring(f.ring.with_field(field))
    ring = PolyRing(field, LOCAL)
    x, y = ring.gens()
    return f.compose({f.ring.vars[0]: x + a, f.ring.vars[1]: y + b}, ring)


def multiplicity_at_origin(f):
    if not f.terms:
        raise ValueError("the zero polynomial has no multiplicity")
    return f.lowest_degree()


# -------------------------------------------------------- intersection number
def _truncated_dimension(f, g, N):
    """dim k[x,y] / ((f, g) + m^N)."""
    monos = [(i, d - i) for d in range(N) for i in range(d, -1, -1)]
    index = {e: k for k, e in enumerate(monos)}
    rows = []
    for h in (f, g):
        low = h.lowest_degree()
        for d in range(N - low):
            for i in range(d, -1, -1):
                row = {}
                for e, c in h.terms.items():
                    te = (e[0] + i, e[1] + d - i)
                    if te[0] + te[1] < N:
                        row[index[te]] = c
                if row:
                    rows.append(row)
        checkpoint(len(rows))
    return len(monos) - linalg.rank(rows, len(monos))


def _quotient_dimension(f, g):
    """Local intersection number at the origin by truncation.

    dim_N grows with N; once dim_N = dim_{N+1} the ideal contains m^N
    (Nakayama), so the value is final.
    """
    N = 2
    while True:
        a = _truncated_dimension(f, g, N)
        b = _truncated_dimension(f, g, N + 1)
        if a == b:
            return a
        N = max(N + 1, 2 * N, b + 1)


def resultant_method_applies(f, g):
    """True when the origin is the only common zero of f, g on the line x = 0 (finite or not)."""
    fy = f.compose({"x": f.ring.zero, "y": f.ring.gen("y")})
    gy = g.compose({"x": g.ring.zero, "y": g.ring.gen("y")})
    lf = f.lc_in("y").compose({"x": f.ring.zero, "y": f.ring.zero})
    lg = g.lc_in("y").compose({"x": g.ring.zero, "y": g.ring.zero})
    if (not lf.terms or f.degree_in("y") == 0) and (not lg.terms or g.degree_in("y") == 0):
        return False
    if lf.is_zero() and lg.is_zero():
        return False
    if not fy.terms and not gy.terms:
        return False
    common = gcd(fy, gy) if fy.terms and gy.terms else (fy if fy.terms else gy)
    return len(common.terms) == 1


def _resultant_valuation(f, g):
    R = resultant(f, g, "y")
    if not R.terms:
        raise InfiniteMultiplicity("resultant vanishes identically")
    return min(e[0] for e in R.terms)


def local_intersection(f, g, method="auto"):
    """(f . g) at the origin for local equations f, g over one field."""
    if not f.terms or not g.terms:
        raise InfiniteMultiplicity("a zero equation")
    if f.constant_coeff() != 0 or g.constant_coeff() != 0:
        return 0
    h = gcd(f, g)
    if not h.is_constant():
        if h.constant_coeff() == 0:
            raise InfiniteMultiplicity(f"common component {h} through the point")
        f, g = f.exact_div(h), g.exact_div(h)
    if method == "resultant":
        if not resultant_method_applies(f, g):
            raise ValueError("resultant valuation does not apply at this point")
        return _resultant_valuation(f, g)
    value = _quotient_dimension(f, g)
    if method == "auto" and resultant_method_applies(f, g):
        other = _resultant_valuation(f, g)
        if other != value:
            raise RuntimeError(f"intersection number disagreement: quotient {value}, resultant {other}")
    return value


def intersection_multiplicity(C1, C2, p=ORIGIN, method="auto"):
    """(C1 . C2)_p; zero, with a warning, when p is not on both curves."""
    f = local_equation(C1, p)
    g = local_equation(C2, p)
    if f.constant_coeff() != 0 or g.constant_coeff() != 0:
        warnings.warn(f"point {p.text()} is not on both curves", stacklevel=2)
        return 0
    return local_intersection(f, g, method)


def is_transverse(C, D, p=ORIGIN):
    return intersection_multiplicity(C, D, p) == 1


# ------------------------------------------------------------------ blow-ups
@dataclass(frozen=True)
class BlowUp:
    """Blow-up of the origin.  Chart A: (x, y) -> (x, x*y); chart B: (x, y) -> (x*y, y)."""

    m: int
    total_a: object
    strict_a: object
    total_b: object
    strict_b: object


def _strip(f, var, m):
    i = f.ring.index[var]
    return type(f)(f.ring, {e[:i] + (e[i] - m,) + e[i + 1:]: c for e, c in f.terms.items()})


def blow_up(f, p=None):
    """Blow up the point p (default: origin) of the affine curve f(x, y) = 0."""
    if p is not None:
        f = local_affine(f, p) if not isinstance(p, PlanePoint) else local_equation(f, p)
    if f.constant_coeff() != 0:
        raise ValueError("the point is not on the curve")
    ring = f.ring
    x, y = ring.gens()
    m = multiplicity_at_origin(f)
    ta = f.compose({ring.vars[0]: x, ring.vars[1]: x * y}, ring)
    tb = f.compose({ring.vars[0]: x * y, ring.vars[1]: y}, ring)
    return BlowUp(m, ta, _strip(ta, ring.vars[0], m), tb, _strip(tb, ring.vars[1], m))


def exceptional_points(f):
    """Points where the strict transform of f meets E after blowing up the origin.

    Returns (rational points, packets): each point is ("A", c, k) for
    (0, c) in chart A or ("B", 0, k) for the origin of chart B, with k the
    multiplicity of the tangent direction; packets are (Packet, k).
    """
    field = f.ring.field
    cone = f.lowest_form()
    pts, packets = p1.binary_roots(cone)
    out = []
    for (X, Y), k in pts:
        if X == 0:
            out.append(("B", field.zero, k))
        else:
            out.append(("A", Y, k))
    return out, [(pk, pk.multiplicity) for pk in packets]


def child_equation(blow, chart, c):
    """Strict transform recentred at the point c of E in the given chart."""
    if chart == "B":
        return blow.strict_b
    f = blow.strict_a
    ring = f.ring
    x, y = ring.gens()
    return f.compose({"x": x, "y": y + c}, ring)


def _over_field(f, field):
    if f.ring.field == field:
        return f
    return f.change_ring(f.ring.with_field(field))


def blowup_decomposition(f, g):
    """(m_f * m_g, [(label, weight, (f~ . g~)_q)]) over common points q of E.

    The local intersection number at the origin equals
    m_f * m_g + sum(weight * value).
    """
    bf, bg = blow_up(f), blow_up(g)
    terms = []
    field = f.ring.field
    cf, cg = f.lowest_form(), g.lowest_form()
    common = gcd(cf, cg)
    if common.degree() >= 1:
        pts, packets = p1.binary_roots(common)
        for (X, Y), _ in pts:
            chart, c = ("B", field.zero) if X == 0 else ("A", Y)
            val = local_intersection(child_equation(bf, chart, c), child_equation(bg, chart, c))
            terms.append((f"{chart}:{c}", 1, val))
        for pk in packets:
            terms.extend(_packet_terms(bf, bg, pk.coeffs()))
    return bf.m * bg.m, terms


def _packet_terms(bf, bg, modulus, depth=0):
    modulus = tuple(Fraction(c) for c in modulus)
    K = NumberField(modulus, "w")
    try:
        c = K.gen()
        a = child_equation(_blow_over(bf, K), "A", c)
        b = child_equation(_blow_over(bg, K), "A", c)
        val = local_intersection(a, b)
    except ZeroDivisorSplit as exc:
        q = exc.factor
        r = upoly.divmod_(modulus, q)[0]
        return _packet_terms(bf, bg, q, depth + 1) + _packet_terms(bf, bg, r, depth + 1)
    return [(f"A:{upoly.to_text(modulus, 't')}", upoly.deg(modulus), val)]


def _blow_over(b, K):
    return BlowUp(b.m, _over_field(b.total_a, K), _over_field(b.strict_a, K),
                  _over_field(b.total_b, K), _over_field(b.strict_b, K))


# -------------------------------------------------------- resolution trees
@dataclass
class TreeNode:
    """An infinitely near point: its location on the last exceptional divisor and m."""

    location: str
    m: int
    children: list = dc_field(default_factory=list)
    truncated: bool = False
    weight: int = 1

    def to_json(self):
        out = {"m": self.m, "location_minpoly": self.location,
               "children": [c.to_json() for c in self.children]}
        if self.truncated:
            out["truncated"] = True
        return out

    def levels(self, depth):
        """Per level, the sorted multiset of (path, m); None past a truncation."""
        out = []
        frontier = [((), self)]
        for _ in range(depth):
            if any(node.truncated for _, node in frontier):
                out.append(None)
                break
            out.append(sorted((path + (node.location,), node.m) for path, node in frontier))
            frontier = [(path + (node.location,), ch) for path, node in frontier for ch in node.children]
        return out


def _location(chart, c, modulus=None):
    if modulus is not None:
        return f"A:{upoly.to_text(modulus, 't')}"
    if chart == "B":
        return "B:0"
    return f"A:t - ({c})" if c != 0 else "A:t"


def _build(f, depth, location, weight=1):
    m = multiplicity_at_origin(f)
    node = TreeNode(location, m, weight=weight)
    if depth <= 1:
        return node
    checkpoint(len(f.terms))
    b = blow_up(f)
    pts, packets = exceptional_points(f)
    kids = []
    for chart, c, _ in pts:
        kids.append(_build(child_equation(b, chart, c), depth - 1, _location(chart, c)))
    for pk, _ in packets:
        kids.extend(_packet_children(f, b, pk.coeffs(), depth - 1))
    kids.sort(key=lambda n: n.location)
    node.children = kids
    return node


def _packet_children(f, b, modulus, depth):
    field = f.ring.field
    if field != QQ:
        # a point over an extension of an extension: not representable here
        return [TreeNode(f"A:{upoly.to_text(modulus, 't') if all(isinstance(c, Fraction) for c in modulus) else str(modulus)}",
                         0, truncated=True)]
    modulus = tuple(Fraction(c) for c in modulus)
    K = NumberField(modulus, "w")
    try:
        child = child_equation(_blow_over(b, K), "A", K.gen())
        return [_build(child, depth, _location("A", None, modulus), weight=upoly.deg(modulus))]
    except ZeroDivisorSplit as exc:
        q = exc.factor
        r = upoly.divmod_(modulus, q)[0]
        return _packet_children(f, b, q, depth) + _packet_children(f, b, r, depth)


def resolution_tree(C, p=ORIGIN, depth=2):
    """Tree of infinitely near points of C over p, ``depth`` levels deep (root = level 1)."""
    if depth < 1:
        raise ValueError("depth must be positive")
    f = local_equation(C, p) if isinstance(p, PlanePoint) else local_affine(C, p)
    if f.constant_coeff() != 0:
        raise ValueError("the point is not on the curve")
    return _build(f, depth, "root")


def shared_tree_depth(C1, C2, p=ORIGIN, max_depth=None):
    """Number of leading levels on which the two resolution trees agree (at most max_depth)."""
    if max_depth is None:
        D = max(C1.degree, C2.degree) if hasattr(C1, "degree") and not callable(C1.degree) else 3
        max_depth = D * D + 1
    t1 = resolution_tree(C1, p, max_depth)
    t2 = resolution_tree(C2, p, max_depth)
    l1, l2 = t1.levels(max_depth), t2.levels(max_depth)
    shared = 0
    for a, b in zip(l1, l2):
        if a is None or b is None:
            raise TreeTruncated(f"trees agree on {shared} levels, then need a nested extension")
        if a != b:
            break
        shared += 1
    return shared
