"""Exact scalar and polynomial arithmetic."""

from .fields import (QQ, NFElement, NumberField, RatFunc, RationalFunctionField,
                     ZeroDivisorSplit, field_from_record, field_of)
from .poly import Poly, PolyRing, canonical
from .ops import DegenerateInput, compose, content, divides, gcd, lcm, prem, resultant, squarefree_part
from .parse import PolySyntaxError, parse_poly
from .roots import NumericRoot, PrecisionError, rational_roots_and_packets, univariate_roots

__all__ = [
    "QQ", "NFElement", "NumberField", "RatFunc", "RationalFunctionField", "ZeroDivisorSplit",
    "field_from_record", "field_of", "Poly", "PolyRing", "canonical", "DegenerateInput",
    "compose", "content", "divides", "gcd", "lcm", "prem", "resultant", "squarefree_part",
    "PolySyntaxError", "parse_poly", "NumericRoot", "PrecisionError",
    "rational_roots_and_packets", "univariate_roots",
]
