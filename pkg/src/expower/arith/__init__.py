"""Exact scalars: rationals, sparse polynomials, rational functions."""

from .field import QQ, Field
from .poly import MultiPoly, as_poly, gcd_many, grlex_key, poly_arith, poly_gcd, poly_lcm
from .rational import Rational, as_rational, rational_arith
from .ratfunc import RatFunc, as_ratfunc, canon, ratfun_arith

__all__ = [
    "QQ",
    "Field",
    "MultiPoly",
    "RatFunc",
    "Rational",
    "as_poly",
    "as_ratfunc",
    "as_rational",
    "canon",
    "gcd_many",
    "grlex_key",
    "poly_arith",
    "poly_gcd",
    "poly_lcm",
    "ratfun_arith",
    "rational_arith",
]
