"""Polynomial text grammar.

Accepted: integer and rational literals, declared variables, the field
parameter (``t`` of Q(t) or the number-field generator), ``+ - * / ^`` and
parentheses.  ``^`` takes a nonnegative integer exponent; division and
negative exponents are only allowed on scalars.  Whitespace is ignored.
Printing produces text that parses back to the same polynomial.
"""

import ast
from fractions import Fraction

from .fields import QQ, NFElement, RatFunc


class PolySyntaxError(ValueError):
    pass


def _tree(text):
    if not isinstance(text, str) or not text.strip():
        raise PolySyntaxError("empty polynomial text")
    if "**" in text:
        raise PolySyntaxError("use ^ for powers")
    try:
        return ast.parse(text.replace("^", "**"), mode="eval").body
    except SyntaxError as exc:
        raise PolySyntaxError(f"cannot parse {text!r}: {exc.msg}") from None


def _int_exponent(node, value):
    from .poly import Poly

    if isinstance(value, Poly):
        if not value.is_constant():
            raise PolySyntaxError("exponent must be an integer literal")
        value = value.constant_coeff()
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value)
    if isinstance(value, (RatFunc, NFElement)) and value.field.is_rational(value):
        f = value.field.to_fraction(value)
        if f.denominator == 1:
            return int(f)
    raise PolySyntaxError("exponent must be an integer literal")


def parse_poly(text, ring):
    from .poly import Poly

    field = ring.field

    def ev(node):
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                raise PolySyntaxError(f"unsupported literal {node.value!r}")
            return ring.const(node.value)
        if isinstance(node, ast.Name):
            if node.id in ring.index:
                return ring.gen(node.id)
            if field.var is not None and node.id == field.var:
                return ring.const(field.gen())
            raise PolySyntaxError(f"unknown variable {node.id!r} (declared: {', '.join(ring.vars)})")
        if isinstance(node, ast.UnaryOp):
            v = ev(node.operand)
            if isinstance(node.op, ast.USub):
                return -v
            if isinstance(node.op, ast.UAdd):
                return v
            raise PolySyntaxError("unsupported unary operator")
        if isinstance(node, ast.BinOp):
            a = ev(node.left)
            b = ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                if not b.is_constant():
                    raise PolySyntaxError("division by a non-constant polynomial")
                c = b.constant_coeff()
                if c == 0:
                    raise PolySyntaxError("division by zero")
                return a * (1 / c)
            if isinstance(node.op, ast.Pow):
                n = _int_exponent(node.right, b)
                if n < 0:
                    if not a.is_constant() or a.is_zero():
                        raise PolySyntaxError("negative exponent on a non-scalar")
                    return ring.const((1 / a.constant_coeff()) ** (-n))
                return a ** n
            raise PolySyntaxError("unsupported operator")
        raise PolySyntaxError(f"unsupported syntax: {ast.dump(node)[:40]}")

    out = ev(_tree(text))
    assert isinstance(out, Poly)
    return out


def parse_univariate(text, var=None):
    """Parse a univariate polynomial over Q; returns (coefficients low->high, var)."""
    tree = _tree(text)
    names = sorted({n.id for n in ast.walk(tree) if isinstance(n, ast.Name)})
    if var is None:
        if len(names) != 1:
            raise PolySyntaxError(f"expected exactly one variable in {text!r}, got {names}")
        var = names[0]
    elif names and names != [var]:
        raise PolySyntaxError(f"expected variable {var!r} in {text!r}, got {names}")
    from .poly import PolyRing

    p = parse_poly(text, PolyRing(QQ, (var,)))
    d = max(p.degree(), 0)
    coeffs = [Fraction(0)] * (d + 1)
    for e, c in p.terms.items():
        coeffs[e[0]] = c
    return tuple(coeffs), var


def _monomial_text(ring, e):
    parts = []
    for v, k in zip(ring.vars, e):
        if k == 1:
            parts.append(v)
        elif k > 1:
            parts.append(f"{v}^{k}")
    return "*".join(parts)


def _coeff_parts(field, c):
    """(sign, magnitude text, is_unit, needs_parens) for a coefficient."""
    if field == QQ:
        return ("-" if c < 0 else "+"), str(abs(c)), abs(c) == 1, False
    if field.is_rational(c):
        f = field.to_fraction(c)
        return ("-" if f < 0 else "+"), str(abs(f)), abs(f) == 1, False
    text = str(c)
    if isinstance(c, RatFunc) and c.den == (Fraction(1),):
        return "+", text, False, True
    return "+", text, False, not text.startswith("(")


def format_poly(p):
    if not p.terms:
        return "0"
    field = p.ring.field
    out = []
    for e, c in p.sorted_terms():
        mono = _monomial_text(p.ring, e)
        sign, mag, unit, parens = _coeff_parts(field, c)
        if parens:
            mag = f"({mag})"
        if mono:
            body = mono if unit else f"{mag}*{mono}"
        else:
            body = mag
        out.append((sign, body))
    s, b = out[0]
    text = ("-" if s == "-" else "") + b
    for s, b in out[1:]:
        text += f" {s} {b}"
    return text
