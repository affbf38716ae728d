"""Coefficient fields: Q, Q(t) and Q[k]/(m(k)).

Rationals are plain :class:`fractions.Fraction` values.  The other two
fields get small element classes with operator overloading so that
:class:`~planedyn.algebra.poly.Poly` can stay coefficient-agnostic.
Only one extension over Q is supported; building Q(t) or a number field on
top of anything but Q is refused.
"""

from fractions import Fraction

from . import upoly


class ZeroDivisorSplit(ArithmeticError):
    """Raised when a number-field modulus turns out to be reducible.

    ``factor`` is a proper monic factor of the modulus discovered while
    inverting an element; callers may split the computation over it.
    """

    def __init__(self, field, factor):
        super().__init__(f"zero divisor in {field}: modulus has factor {upoly.to_text(factor, field.var)}")
        self.field = field
        self.factor = factor


class RationalField:
    """The field Q, with Fraction elements."""

    var = None
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            return Fraction(value)
        raise TypeError(f"cannot convert {value!r} to a rational")

    convert = __call__

    def is_rational(self, a):
        return True

    def to_fraction(self, a):
        return a

    def to_text(self, a):
        return str(a)

    def record(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


QQ = RationalField()


def _coerce_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return None


class RationalFunctionField:
    """Q(t) for a single transcendental ``var``."""

    def __init__(self, var="t"):
        if not isinstance(var, str) or not var.isidentifier():
            raise ValueError(f"bad parameter name {var!r}")
        self.var = var
        self.zero = RatFunc(self, upoly.ZERO, upoly.ONE)
        self.one = RatFunc(self, upoly.ONE, upoly.ONE)

    def __call__(self, value):
        if isinstance(value, RatFunc):
            if value.field != self:
                raise TypeError(f"element of {value.field} is not in {self}")
            return value
        f = _coerce_fraction(value)
        if f is None:
            if isinstance(value, str):
                f = Fraction(value)
            else:
                raise TypeError(f"cannot convert {value!r} into {self}")
        return RatFunc(self, upoly.const(f), upoly.ONE)

    convert = __call__

    def gen(self):
        return RatFunc(self, (Fraction(0), Fraction(1)), upoly.ONE)

    def from_polys(self, num, den=upoly.ONE):
        return RatFunc.make(self, tuple(Fraction(c) for c in num), tuple(Fraction(c) for c in den))

    def is_rational(self, a):
        return len(a.num) <= 1 and a.den == upoly.ONE

    def to_fraction(self, a):
        if not self.is_rational(a):
            raise ValueError(f"{a} is not a constant")
        return a.num[0] if a.num else Fraction(0)

    def to_text(self, a):
        return str(a)

    def record(self):
        return f"Q({self.var})"

    def __eq__(self, other):
        return isinstance(other, RationalFunctionField) and other.var == self.var

    def __hash__(self):
        return hash(("Q(t)", self.var))

    def __repr__(self):
        return f"QQ({self.var})"


class RatFunc:
    """Element num/den of Q(t), in lowest terms with monic denominator."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field, num, den):
        self.field = field
        self.num = num
        self.den = den

    @classmethod
    def make(cls, field, num, den):
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        num = upoly.trim(num)
        den = upoly.trim(den)
        if not num:
            return cls(field, upoly.ZERO, upoly.ONE)
        if len(den) > 1:
            g = upoly.gcd_(num, den)
            if len(g) > 1:
                num = upoly.divmod_(num, g)[0]
                den = upoly.divmod_(den, g)[0]
        lc = den[-1]
        if lc != 1:
            num = upoly.scale(num, 1 / lc)
            den = upoly.scale(den, 1 / lc)
        return cls(field, num, den)

    def _lift(self, other):
        if isinstance(other, RatFunc):
            if other.field != self.field:
                raise TypeError(f"mixing {self.field} and {other.field}")
            return other
        f = _coerce_fraction(other)
        if f is None:
            return NotImplemented
        return RatFunc(self.field, upoly.const(f), upoly.ONE)

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RatFunc.make(self.field, upoly.add(self.num, o.num), self.den)
        return RatFunc.make(self.field,
                            upoly.add(upoly.mul(self.num, o.den), upoly.mul(o.num, self.den)),
                            upoly.mul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(self.field, upoly.neg(self.num), self.den)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if not self.num or not o.num:
            return self.field.zero
        if self.den == upoly.ONE and o.den == upoly.ONE:
            return RatFunc(self.field, upoly.mul(self.num, o.num), upoly.ONE)
        return RatFunc.make(self.field, upoly.mul(self.num, o.num), upoly.mul(self.den, o.den))

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero in Q(t)")
        return RatFunc.make(self.field, self.den, self.num)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.field, upoly.power(self.num, n), upoly.power(self.den, n))

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.field == other.field and self.num == other.num and self.den == other.den
        f = _coerce_fraction(other)
        if f is None:
            return NotImplemented
        return self.den == upoly.ONE and self.num == upoly.const(f)

    def __hash__(self):
        if self.den == upoly.ONE and len(self.num) <= 1:
            return hash(self.num[0] if self.num else Fraction(0))
        return hash((self.num, self.den))

    def __bool__(self):
        return bool(self.num)

    def evaluate(self, t0):
        """Specialize at a rational parameter value."""
        t0 = Fraction(t0)
        d = upoly.evaluate(self.den, t0)
        if d == 0:
            raise ZeroDivisionError(f"denominator {upoly.to_text(self.den, self.field.var)} vanishes at {self.field.var}={t0}")
        return Fraction(upoly.evaluate(self.num, t0)) / d

    def __str__(self):
        v = self.field.var
        if self.den == upoly.ONE:
            return upoly.to_text(self.num, v)
        return f"({upoly.to_text(self.num, v)})/({upoly.to_text(self.den, v)})"

    def __repr__(self):
        return f"RatFunc({self})"


class NumberField:
    """Q[var]/(m(var)) with m monic and squarefree over Q.

    If m is reducible the ring is a product of fields; inverting a zero
    divisor raises :class:`ZeroDivisorSplit` carrying the factor found.
    """

    def __init__(self, modulus, var="w"):
        m = tuple(Fraction(c) for c in modulus)
        m = upoly.trim(m)
        if isinstance(var, str) is False or not var.isidentifier():
            raise ValueError(f"bad generator name {var!r}")
        if upoly.deg(m) < 1:
            raise ValueError("number field modulus must have positive degree")
        m = upoly.monic(m)
        if upoly.deg(upoly.gcd_(m, upoly.deriv(m))) > 0:
            raise ValueError(f"modulus {upoly.to_text(m, var)} is not squarefree")
        self.modulus = m
        self.var = var
        self.degree = upoly.deg(m)
        self.zero = NFElement(self, upoly.ZERO)
        self.one = NFElement(self, upoly.ONE)

    def __call__(self, value):
        if isinstance(value, NFElement):
            if value.field != self:
                raise TypeError(f"element of {value.field} is not in {self}")
            return value
        if isinstance(value, (RatFunc,)):
            raise TypeError("cannot nest Q(t) inside a number field")
        f = _coerce_fraction(value)
        if f is None:
            if isinstance(value, str):
                f = Fraction(value)
            else:
                raise TypeError(f"cannot convert {value!r} into {self}")
        return NFElement(self, upoly.const(f))

    convert = __call__

    def gen(self):
        return self.from_poly((0, 1))

    def from_poly(self, coeffs):
        c = upoly.trim(tuple(Fraction(x) for x in coeffs))
        return NFElement(self, upoly.rem(c, self.modulus))

    def is_rational(self, a):
        return len(a.c) <= 1

    def to_fraction(self, a):
        if not self.is_rational(a):
            raise ValueError(f"{a} is not rational")
        return a.c[0] if a.c else Fraction(0)

    def to_text(self, a):
        return str(a)

    def modulus_text(self):
        return upoly.to_text(self.modulus, self.var)

    def record(self):
        return {"numberfield": self.modulus_text(), "var": self.var}

    def complex_roots(self, dps=30):
        """Numeric embeddings: the roots of the modulus."""
        from .roots import numeric_roots_q

        return [r.value for r in numeric_roots_q(self.modulus, dps=dps)]

    def __eq__(self, other):
        return isinstance(other, NumberField) and other.modulus == self.modulus and other.var == self.var

    def __hash__(self):
        return hash(("NF", self.modulus, self.var))

    def __repr__(self):
        return f"QQ[{self.var}]/({self.modulus_text()})"


class NFElement:
    __slots__ = ("field", "c")

    def __init__(self, field, c):
        self.field = field
        self.c = c

    def _lift(self, other):
        if isinstance(other, NFElement):
            if other.field != self.field:
                raise TypeError(f"mixing {self.field} and {other.field}")
            return other
        f = _coerce_fraction(other)
        if f is None:
            return NotImplemented
        return NFElement(self.field, upoly.const(f))

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return NFElement(self.field, upoly.add(self.c, o.c))

    __radd__ = __add__

    def __neg__(self):
        return NFElement(self.field, upoly.neg(self.c))

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return NFElement(self.field, upoly.sub(self.c, o.c))

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return NFElement(self.field, upoly.sub(o.c, self.c))

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return NFElement(self.field, upoly.rem(upoly.mul(self.c, o.c), self.field.modulus))

    __rmul__ = __mul__

    def inverse(self):
        if not self.c:
            raise ZeroDivisionError(f"inverse of zero in {self.field}")
        g, s, _ = upoly.xgcd(self.c, self.field.modulus)
        if upoly.deg(g) > 0:
            raise ZeroDivisorSplit(self.field, g)
        return NFElement(self.field, upoly.rem(s, self.field.modulus))

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, NFElement):
            return self.field == other.field and self.c == other.c
        f = _coerce_fraction(other)
        if f is None:
            return NotImplemented
        return self.c == upoly.const(f)

    def __hash__(self):
        if len(self.c) <= 1:
            return hash(self.c[0] if self.c else Fraction(0))
        return hash(self.c)

    def __bool__(self):
        return bool(self.c)

    def norm_poly_eval(self, root):
        """Value under the embedding sending the generator to ``root``."""
        return upoly.evaluate(self.c, root)

    def __str__(self):
        return upoly.to_text(self.c, self.field.var)

    def __repr__(self):
        return f"NFElement({self} mod {self.field.modulus_text()})"


def field_of(value):
    if isinstance(value, RatFunc) or isinstance(value, NFElement):
        return value.field
    return QQ


def field_from_record(rec):
    """Inverse of ``field.record()``."""
    if rec in (None, "Q", "QQ"):
        return QQ
    if isinstance(rec, str):
        s = rec.strip()
        if s.startswith("Q(") and s.endswith(")"):
            return RationalFunctionField(s[2:-1].strip())
        raise ValueError(f"unknown field {rec!r}")
    if isinstance(rec, dict) and "numberfield" in rec:
        from .parse import parse_univariate

        text = rec["numberfield"]
        var = rec.get("var")
        coeffs, var = parse_univariate(text, var)
        return NumberField(coeffs, var)
    raise ValueError(f"unknown field {rec!r}")
