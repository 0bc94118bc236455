"""Real-number tier used for function values and norms.

Measures and exponents are always :class:`fractions.Fraction`.  Values are
either Python floats (the default ``double`` tier) or :mod:`mpmath` numbers
(the ``extended`` tier), selected by the ``NONCOMPACT_PRECISION`` environment
variable at call time.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from numbers import Rational

import mpmath

ENV_VAR = "NONCOMPACT_PRECISION"
TIERS = ("double", "extended")
EXTENDED_DPS = 40

INF = math.inf


def tier() -> str:
    name = os.environ.get(ENV_VAR, "double").strip().lower() or "double"
    if name not in TIERS:
        raise ValueError(f"{ENV_VAR} must be one of {TIERS}, got {name!r}")
    return name


def real(x):
    """Convert ``x`` (int, Fraction, float, mpf) to the active real type."""
    if tier() == "double":
        return float(x)
    if mpmath.mp.dps < EXTENDED_DPS:
        mpmath.mp.dps = EXTENDED_DPS
    if isinstance(x, Rational) and not isinstance(x, int):
        return mpmath.mpf(x.numerator) / mpmath.mpf(x.denominator)
    return mpmath.mpf(x)


def power(base, exponent):
    """``base ** exponent`` for nonnegative ``base`` in the active tier.

    ``exponent`` may be a Fraction, int, float or infinity.  ``0 ** 0`` is 1
    and ``0 ** negative`` is infinity.
    """
    if exponent == 0:
        return real(1)
    if base == 0:
        return real(0) if exponent > 0 else real(INF)
    if isinstance(base, Fraction) and isinstance(exponent, int):
        return real(base ** exponent)
    return real(base) ** real(exponent)


def is_inf(x) -> bool:
    return x == INF


def as_exponent(x) -> Fraction | float:
    """Parse an exponent: ``inf``/``oo`` map to ``math.inf``, the rest to Fraction."""
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "infinity", "oo", "∞"):
            return INF
        return Fraction(s)
    if isinstance(x, float):
        if math.isinf(x):
            if x < 0:
                raise ValueError("exponent must be positive")
            return INF
        return Fraction(x).limit_denominator(10**12)
    return Fraction(x)


def reciprocal(p) -> Fraction:
    """``1/p`` with the convention ``1/inf = 0``."""
    if is_inf(p):
        return Fraction(0)
    return 1 / Fraction(p)


def isclose(a, b, rel: float = 1e-12, abs_tol: float = 0.0) -> bool:
    if is_inf(a) or is_inf(b):
        return a == b
    return math.isclose(float(a), float(b), rel_tol=rel, abs_tol=abs_tol)
