"""Sparse multivariate polynomials over Q, Q(t) or a number field.

A :class:`Poly` maps exponent tuples to nonzero coefficients.  Values are
treated as immutable: every operation returns a new polynomial and nothing
mutates ``terms`` after construction.
"""

import heapq
from fractions import Fraction
from math import gcd as igcd, lcm as ilcm

from . import upoly
from .fields import QQ, NumberField, RatFunc, RationalFunctionField
from ..budget import checkpoint


class PolyRing:
    """Polynomial ring field[vars]; equality is by field and variable names."""

    def __init__(self, field, vars):
        vars = tuple(vars)
        if len(set(vars)) != len(vars):
            raise ValueError(f"repeated variable in {vars}")
        for v in vars:
            if not v.isidentifier():
                raise ValueError(f"bad variable name {v!r}")
            if v == field.var:
                raise ValueError(f"variable {v!r} clashes with the field parameter")
        self.field = field
        self.vars = vars
        self.nvars = len(vars)
        self.index = {v: i for i, v in enumerate(vars)}
        self._zero_exp = (0,) * self.nvars

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.field == other.field and self.vars == other.vars

    def __hash__(self):
        return hash((self.field, self.vars))

    def __repr__(self):
        return f"{self.field!r}[{','.join(self.vars)}]"

    @property
    def zero(self):
        return Poly(self, {})

    @property
    def one(self):
        return Poly(self, {self._zero_exp: self.field.one})

    def const(self, c):
        c = self.field.convert(c)
        return Poly(self, {self._zero_exp: c} if c != 0 else {})

    def gen(self, name):
        e = [0] * self.nvars
        e[self.index[name]] = 1
        return Poly(self, {tuple(e): self.field.one})

    def gens(self):
        return tuple(self.gen(v) for v in self.vars)

    def monomial(self, exps, c=1):
        c = self.field.convert(c)
        return Poly(self, {tuple(exps): c} if c != 0 else {})

    def __call__(self, value):
        if isinstance(value, Poly):
            if value.ring == self:
                return value
            return value.change_ring(self)
        if isinstance(value, str):
            from .parse import parse_poly

            return parse_poly(value, self)
        return self.const(value)

    def with_vars(self, vars):
        return PolyRing(self.field, vars)

    def with_field(self, field):
        return PolyRing(field, self.vars)


def _grlex_key(e):
    return (sum(e), e)


class Poly:
    __slots__ = ("ring", "terms", "_deg", "_hash")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms
        self._deg = None
        self._hash = None

    @classmethod
    def from_terms(cls, ring, terms):
        conv = ring.field.convert
        out = {}
        for e, c in terms.items():
            c = conv(c)
            if c != 0:
                out[tuple(e)] = c
        return cls(ring, out)

    # ------------------------------------------------------------------ basics
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and self.ring._zero_exp in self.terms)

    def constant_coeff(self):
        return self.terms.get(self.ring._zero_exp, self.ring.field.zero)

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        if self._deg is None:
            self._deg = max((sum(e) for e in self.terms), default=-1)
        return self._deg

    def degree_in(self, var):
        i = self.ring.index[var]
        return max((e[i] for e in self.terms), default=-1)

    def lowest_degree(self):
        """Order of vanishing at the origin; -1 for zero."""
        return min((sum(e) for e in self.terms), default=-1)

    def variables(self):
        """Variables that actually occur."""
        present = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    present.add(i)
        return tuple(v for i, v in enumerate(self.ring.vars) if i in present)

    def is_homogeneous(self):
        return len({sum(e) for e in self.terms}) <= 1

    def homogeneous_part(self, k):
        return Poly(self.ring, {e: c for e, c in self.terms.items() if sum(e) == k})

    def leading_form(self):
        return self.homogeneous_part(self.degree())

    def lowest_form(self):
        return self.homogeneous_part(self.lowest_degree())

    def leading_term(self):
        """(exponent, coefficient) of the grlex-largest term."""
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def lex_leading_term(self):
        e = max(self.terms)
        return e, self.terms[e]

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), self.ring.field.zero)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    # -------------------------------------------------------------- arithmetic
    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise TypeError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        try:
            return self.ring.const(other)
        except TypeError:
            return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if len(o.terms) > len(self.terms):
            a, b = o.terms, self.terms
        else:
            a, b = self.terms, o.terms
        out = dict(a)
        for e, c in b.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s != 0:
                    out[e] = s
                else:
                    del out[e]
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            try:
                c = self.ring.field.convert(other)
            except TypeError:
                return NotImplemented
            return self.scale(c)
        if other.ring != self.ring:
            raise TypeError(f"ring mismatch: {self.ring} vs {other.ring}")
        if not self.terms or not other.terms:
            return self.ring.zero
        checkpoint(len(self.terms) * len(other.terms))
        out = {}
        n = self.ring.nvars
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(e1[i] + e2[i] for i in range(n)) if n != 2 else (e1[0] + e2[0], e1[1] + e2[1])
                s = out.get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return Poly(self.ring, {e: c for e, c in out.items() if c != 0})

    __rmul__ = __mul__

    def scale(self, c):
        if c == 0:
            return self.ring.zero
        if c == 1:
            return self
        return Poly(self.ring, {e: v * c for e, v in self.terms.items()})

    def __truediv__(self, other):
        if isinstance(other, Poly):
            if not other.is_constant():
                return self.exact_div(other)
            other = other.constant_coeff()
        c = self.ring.field.convert(other)
        return self.scale(1 / c)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        out = self.ring.one
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        try:
            o = self.ring.const(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # ------------------------------------------------------------ structure
    def coeffs_in(self, var):
        """Map power -> coefficient polynomial (free of ``var``) in the same ring."""
        i = self.ring.index[var]
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            e0 = e[:i] + (0,) + e[i + 1:]
            out.setdefault(k, {})[e0] = c
        return {k: Poly(self.ring, t) for k, t in out.items()}

    def lc_in(self, var):
        d = self.degree_in(var)
        i = self.ring.index[var]
        return Poly(self.ring, {e[:i] + (0,) + e[i + 1:]: c for e, c in self.terms.items() if e[i] == d})

    def shift_var(self, var, k):
        """Multiply by var**k."""
        i = self.ring.index[var]
        return Poly(self.ring, {e[:i] + (e[i] + k,) + e[i + 1:]: c for e, c in self.terms.items()})

    def derivative(self, var):
        i = self.ring.index[var]
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                out[e[:i] + (e[i] - 1,) + e[i + 1:]] = c * e[i]
        return Poly(self.ring, out)

    def compose(self, mapping, ring=None):
        """Substitute ``mapping[var]`` for each variable.

        Values may be polynomials (all over one target ring) or scalars.
        Variables missing from ``mapping`` must not occur, unless ``ring``
        shares them, in which case they map to themselves.
        """
        if ring is None:
            for v in mapping.values():
                if isinstance(v, Poly):
                    ring = v.ring
                    break
            else:
                ring = self.ring
        subs = []
        for v in self.ring.vars:
            if v in mapping:
                val = mapping[v]
                subs.append(val if isinstance(val, Poly) else ring.const(val))
            elif v in ring.index:
                subs.append(ring.gen(v))
            else:
                subs.append(None)
        conv = ring.field.convert
        cache = [dict() for _ in subs]
        acc = {}
        for e, c in self.terms.items():
            term = ring.const(conv(c))
            for i, k in enumerate(e):
                if not k:
                    continue
                if subs[i] is None:
                    raise ValueError(f"no substitution for variable {self.ring.vars[i]}")
                p = cache[i].get(k)
                if p is None:
                    p = subs[i] ** k
                    cache[i][k] = p
                term = term * p
            for te, tc in term.terms.items():
                s = acc.get(te)
                acc[te] = tc if s is None else s + tc
        return Poly(ring, {e: c for e, c in acc.items() if c != 0})

    def evaluate(self, point):
        """Value at a point given as a dict var -> scalar (all variables)."""
        conv = self.ring.field.convert
        vals = [point[v] for v in self.ring.vars]
        total = None
        for e, c in self.terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    t = t * vals[i] ** k
            total = t if total is None else total + t
        return conv(0) if total is None else total

    def change_ring(self, ring):
        """Re-express in ``ring`` (variables matched by name, coefficients converted)."""
        idx = []
        for i, v in enumerate(self.ring.vars):
            idx.append(ring.index.get(v))
        conv = ring.field.convert
        out = {}
        n = ring.nvars
        for e, c in self.terms.items():
            ne = [0] * n
            for i, k in enumerate(e):
                if k:
                    if idx[i] is None:
                        raise ValueError(f"variable {self.ring.vars[i]} not in {ring}")
                    ne[idx[i]] = k
            c2 = conv(c)
            if c2 != 0:
                out[tuple(ne)] = c2
        return Poly(ring, out)

    def map_coeffs(self, fn, ring=None):
        ring = ring or self.ring
        out = {}
        for e, c in self.terms.items():
            c2 = fn(c)
            if c2 != 0:
                out[e] = c2
        return Poly(ring, out)

    def homogenize(self, var="z", degree=None):
        """Homogenize with a new variable appended to the ring."""
        ring = self.ring.with_vars(self.ring.vars + (var,))
        d = self.degree() if degree is None else degree
        return Poly(ring, {e + (d - sum(e),): c for e, c in self.terms.items()})

    def dehomogenize(self, var="z"):
        """Set ``var`` = 1 and drop it from the ring."""
        i = self.ring.index[var]
        ring = self.ring.with_vars(self.ring.vars[:i] + self.ring.vars[i + 1:])
        out = {}
        for e, c in self.terms.items():
            e2 = e[:i] + e[i + 1:]
            s = out.get(e2)
            out[e2] = c if s is None else s + c
        return Poly(ring, {e: c for e, c in out.items() if c != 0})

    # --------------------------------------------------------------- division
    def divmod(self, g):
        """Multivariate division by a single divisor under grlex order.

        For a principal ideal the remainder is the unique normal form, so
        ``g`` divides ``self`` exactly when the remainder vanishes.
        """
        if g.ring != self.ring:
            raise TypeError("ring mismatch")
        if not g.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        lt_e, lt_c = g.leading_term()
        inv = 1 / lt_c
        n = self.ring.nvars
        p = dict(self.terms)
        heap = [(-sum(e), tuple(-k for k in e)) for e in p]
        heapq.heapify(heap)
        q = {}
        r = {}
        gterms = [(e, c) for e, c in g.terms.items() if e != lt_e]
        steps = 0
        while heap:
            _, ne = heapq.heappop(heap)
            e = tuple(-k for k in ne)
            c = p.pop(e, None)
            if c is None or c == 0:
                continue
            steps += 1
            if steps % 64 == 0:
                checkpoint(64 * len(gterms))
            if all(e[i] >= lt_e[i] for i in range(n)):
                qe = tuple(e[i] - lt_e[i] for i in range(n))
                qc = c * inv
                q[qe] = qc
                for ge, gc in gterms:
                    te = tuple(ge[i] + qe[i] for i in range(n))
                    old = p.get(te)
                    if old is None:
                        p[te] = -qc * gc
                        heapq.heappush(heap, (-sum(te), tuple(-k for k in te)))
                    else:
                        p[te] = old - qc * gc
            else:
                r[e] = c
        return Poly(self.ring, q), Poly(self.ring, r)

    def exact_div(self, g):
        q, r = self.divmod(g)
        if r.terms:
            raise ArithmeticError("inexact polynomial division")
        return q

    # ------------------------------------------------------------------ text
    def __str__(self):
        from .parse import format_poly

        return format_poly(self)

    def __repr__(self):
        return f"Poly({self}, {self.ring!r})"


# ---------------------------------------------------------------- normalization
def _rational_content_scale(coeffs):
    """Factor making a list of Fractions integral and primitive."""
    den = 1
    for c in coeffs:
        den = ilcm(den, c.denominator)
    g = 0
    for c in coeffs:
        g = igcd(g, int(c * den))
    return Fraction(den, g)


def canonical(f):
    """Normal representative of ``f`` up to a nonzero scalar.

    Over Q: integral primitive coefficients with the lex-largest term
    positive.  Over a number field: monic in the lex-largest term.  Over
    Q(t): coefficients in Z[t] with no common factor, and the lex-largest
    term's leading coefficient a positive integer.
    """
    if not f.terms:
        return f
    field = f.ring.field
    if field == QQ:
        s = _rational_content_scale(list(f.terms.values()))
        if f.lex_leading_term()[1] < 0:
            s = -s
        return f.scale(s)
    if isinstance(field, NumberField):
        return f.scale(1 / f.lex_leading_term()[1])
    if isinstance(field, RationalFunctionField):
        den = upoly.ONE
        for c in f.terms.values():
            if c.den != upoly.ONE:
                den = upoly.divmod_(upoly.mul(den, c.den), upoly.gcd_(den, c.den))[0]
        nums = {}
        for e, c in f.terms.items():
            nums[e] = upoly.mul(c.num, upoly.divmod_(den, c.den)[0]) if den != upoly.ONE else c.num
        g = upoly.ZERO
        for n in nums.values():
            g = upoly.gcd_(g, n)
            if g == upoly.ONE:
                break
        if g != upoly.ONE:
            nums = {e: upoly.divmod_(n, g)[0] for e, n in nums.items()}
        s = _rational_content_scale([c for n in nums.values() for c in n])
        lead = nums[max(nums)]
        if lead[-1] < 0:
            s = -s
        return Poly(f.ring, {e: RatFunc(field, upoly.scale(n, s), upoly.ONE) for e, n in nums.items()})
    raise TypeError(f"unsupported field {field!r}")
