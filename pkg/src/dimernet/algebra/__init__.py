"""Exact and floating arithmetic over Q(zeta_8) and Laurent polynomials in lambda, mu."""

from __future__ import annotations

from .laurent import SPIN_ORDER, LaurentPoly2, equal_up_to_spin, format_poly
from .matrix import PolyMatrix, det_fraction_free
from .rational import RationalFunction
from .scalar import (
    DEFAULT_TOL,
    EXACT,
    FLOAT,
    ExactScalar,
    FloatScalar,
    as_scalar,
    format_scalar,
    parse_scalar,
)
from .univariate import gcd_for_lambda_divisor, lambda_content, uni_divmod, uni_gcd

__all__ = [
    "DEFAULT_TOL", "EXACT", "FLOAT", "ExactScalar", "FloatScalar", "LaurentPoly2",
    "PolyMatrix", "RationalFunction", "SPIN_ORDER", "as_scalar", "det_fraction_free",
    "equal_up_to_spin", "format_poly", "format_scalar", "gcd_for_lambda_divisor",
    "lambda_content", "parse_scalar", "uni_divmod", "uni_gcd",
]
