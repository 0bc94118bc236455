"""Dilation and doubling identities for rearrangements, and span formulas.

Dilating by ``kappa`` in ``n`` dimensions divides every level-set measure by
``kappa^n``.  Derivative data of order ``k`` also picks up a factor
``kappa^k`` in its values.  Both are exact on the measure side; only the
norm ratios involve irrational powers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import reals
from .measure import StepFunction, make_step


@dataclass(frozen=True)
class SobolevParams:
    n: int
    k: int
    p: Fraction = Fraction(1)
    kappa: Fraction = Fraction(1)

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise ValueError("n and k must be positive integers")
        if self.k > self.n:
            raise ValueError(f"need k <= n, got k={self.k}, n={self.n}")
        p, kappa = Fraction(self.p), Fraction(self.kappa)
        if p < 1:
            raise ValueError(f"p must be at least 1, got {p}")
        if kappa <= 0:
            raise ValueError("kappa must be positive")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "kappa", kappa)

    @property
    def limiting(self) -> Fraction:
        """The exponent ``n/k`` of the limiting embedding target."""
        return Fraction(self.n, self.k)


def p_star(params: SobolevParams) -> Fraction:
    n, k, p = params.n, params.k, params.p
    if k * p >= n:
        raise ValueError(f"p_star needs kp < n, got k={k}, p={p}, n={n}")
    ps = n * p / (n - k * p)
    assert Fraction(-n) / ps == k - Fraction(n) / p
    return ps


def dilate(u: StepFunction, params: SobolevParams, derivative: bool = False) -> StepFunction:
    """``x -> u(kappa x)`` on the shrunken domain of measure ``|Omega| / kappa^n``.

    With ``derivative=True`` ``u`` is read as order-``k`` derivative data and
    its values are multiplied by ``kappa^k``.
    """
    kappa = params.kappa
    if kappa < 1:
        raise ValueError(f"kappa must be at least 1, got {kappa}")
    shrink = kappa**params.n
    factor = reals.real(kappa**params.k) if derivative else reals.real(1)
    pieces = [(factor * pc.value, pc.measure / shrink) for pc in u.pieces]
    return make_step(pieces, u.total_space / shrink)


def double_disjoint(u: StepFunction) -> StepFunction:
    """``u`` plus a copy of itself shifted off its own support.

    The support pieces are packed to the left first, so the result needs
    only ``2 |supp u| <= |Omega|``; its rearrangement is ``u*(t/2)``.
    """
    if 2 * u.support_measure > u.total_space:
        raise ValueError(f"2 |supp u| = {2 * u.support_measure} exceeds |Omega| = {u.total_space}")
    packed = [(pc.value, pc.measure) for pc in u.pieces if pc.value != 0]
    return make_step(packed + packed, u.total_space)


def doubling_ratio(params: SobolevParams) -> float:
    """``2^{k/n}``, the growth of the ``L^{n/k,1}`` norm under doubling."""
    return float(reals.power(2, Fraction(params.k, params.n)))


def dilation_ratio(params: SobolevParams, p) -> float:
    """``kappa^{-n/p}``."""
    return float(reals.power(params.kappa, -Fraction(params.n) * reals.reciprocal(p)))


def span_and_alpha(params: SobolevParams, normI) -> tuple[float, float]:
    """``(sigma, alpha) = (2^{1-k/n} ||I||, 2^{-k/n} ||I||)``."""
    if not normI > 0:
        raise ValueError("normI must be positive")
    e = Fraction(params.k, params.n)
    sigma = float(reals.power(2, 1 - e)) * float(normI)
    alpha = float(reals.power(2, -e)) * float(normI)
    assert reals.isclose(alpha, sigma / 2)
    assert sigma <= 2 * float(normI)
    assert alpha < float(normI)
    return sigma, alpha


def elementary_inequality_check(a, b, params: SobolevParams) -> float:
    """``2^{1-k/n} (a^{n/k} + b^{n/k})^{k/n} - (a + b)``, which is never negative."""
    if a < 0 or b < 0:
        raise ValueError("a and b must be nonnegative")
    e = Fraction(params.k, params.n)
    q = 1 / e
    lhs = reals.power(2, 1 - e) * reals.power(reals.power(a, q) + reals.power(b, q), e)
    return float(lhs - (reals.real(a) + reals.real(b)))
