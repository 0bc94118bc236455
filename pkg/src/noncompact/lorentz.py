"""Lorentz functionals of step functions.

``L^{p,q}`` is built on ``u*`` and ``L^{(p,q)}`` on ``u**``.  For ``q = inf``
both suprema are computed exactly as maxima over finitely many candidate
points.  ``L^{(p,q)}`` with finite ``q`` has no rational closed form in
general and is integrated numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from scipy import integrate

from . import reals
from .measure import MaximalSegment, StepFunction, maximal_profile, rearrange

STAR = "star"
DOUBLE_STAR = "double_star"
QUAD_RTOL = 1e-9


@dataclass(frozen=True)
class LorentzExponents:
    p: Fraction | float
    q: Fraction | float
    kind: str = STAR

    def __post_init__(self):
        p, q = reals.as_exponent(self.p), reals.as_exponent(self.q)
        if not p > 0 or not q > 0:
            raise ValueError(f"Lorentz exponents must be positive, got p={p}, q={q}")
        kind = self.kind.replace("-", "_")
        if kind not in (STAR, DOUBLE_STAR):
            raise ValueError(f"kind must be {STAR!r} or {DOUBLE_STAR!r}, got {self.kind!r}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "kind", kind)

    @classmethod
    def weak(cls, r, kind=STAR) -> "LorentzExponents":
        return cls(r, reals.INF, kind)


def lorentz_norm(u: StepFunction, e: LorentzExponents):
    """``||u||_{L^{p,q}} = || t^{1/p - 1/q} u*(t) ||_{L^q(0, |Omega|)}``."""
    prof = rearrange(u)
    if not prof.levels:
        return reals.real(0)
    p, q = e.p, e.q
    inv_p = reals.reciprocal(p)
    bps = prof.breakpoints
    if reals.is_inf(q):
        # t^{1/p} * level increases on every step, so the sup sits at right ends
        return max(reals.power(bps[i + 1], inv_p) * lv for i, lv in enumerate(prof.levels))
    if reals.is_inf(p):
        return reals.real(reals.INF)
    qp = Fraction(q) / Fraction(p)
    acc = reals.real(0)
    for i, lv in enumerate(prof.levels):
        acc += reals.power(lv, q) * (reals.power(bps[i + 1], qp) - reals.power(bps[i], qp))
    return reals.power(acc / reals.real(qp), 1 / Fraction(q))


def _segment_sup(seg: MaximalSegment, inv_p: Fraction):
    """sup of ``t^{1/p} u**(t) = K t^{1/p-1} + c t^{1/p}`` on ``(start, end]``."""

    def f(t):
        return seg.value(t) * reals.power(t, inv_p)

    cands = [seg.end]
    if seg.start > 0:
        cands.append(seg.start)
    if seg.level > 0 and seg.offset > 0 and inv_p > 0:
        # f'(t) = t^{1/p-2} [(1/p - 1) K + (c/p) t]
        t_crit = (1 / float(inv_p) - 1) * float(seg.offset) / float(seg.level)
        if float(seg.start) < t_crit < float(seg.end):
            cands.append(Fraction(t_crit))
    return max(f(t) for t in cands)


def lorentz_maximal_norm(u: StepFunction, e: LorentzExponents):
    """``||u||_{L^{(p,q)}} = || t^{1/p - 1/q} u**(t) ||_{L^q(0, |Omega|)}``.

    For ``q = inf`` the supremum is exact up to floating point.  For finite
    ``q`` segments with a polynomial integrand are done in closed form, the
    rest by adaptive quadrature at relative tolerance ``QUAD_RTOL``.
    """
    prof = rearrange(u)
    if not prof.levels:
        return reals.real(0)
    mp = maximal_profile(prof)
    inv_p = reals.reciprocal(e.p)
    if reals.is_inf(e.q):
        return max(_segment_sup(seg, inv_p) for seg in mp.segments)
    if reals.is_inf(e.p):
        return reals.real(reals.INF)
    q = Fraction(e.q)
    a = float(q * inv_p - 1)  # weight exponent of t
    qf = float(q)
    total = 0.0
    for seg in mp.segments:
        lo, hi = float(seg.start), float(seg.end)
        K, c = float(seg.offset), float(seg.level)
        if K == 0:
            total += c**qf * _monomial_integral(a, lo, hi)
        elif c == 0:
            total += K**qf * _monomial_integral(a - qf, lo, hi)
        else:
            val, _ = integrate.quad(
                lambda t: t**a * ((K + c * t) / t) ** qf, lo, hi, epsabs=0.0, epsrel=QUAD_RTOL, limit=200
            )
            total += val
    return reals.real(total ** (1 / qf))


def _monomial_integral(a: float, lo: float, hi: float) -> float:
    """``int_lo^hi t^a dt``."""
    if a == -1:
        return math.inf if lo == 0 else math.log(hi / lo)
    if lo == 0 and a < -1:
        return math.inf
    return (hi ** (a + 1) - lo ** (a + 1)) / (a + 1)


def norm(u: StepFunction, e: LorentzExponents):
    if e.kind == STAR:
        return lorentz_norm(u, e)
    return lorentz_maximal_norm(u, e)


def weak_norm(u: StepFunction, r, kind=STAR):
    return norm(u, LorentzExponents.weak(r, kind))


def quasinorm_defect(u: StepFunction, v: StepFunction, r):
    """``||u+v||_{r,inf} / (||u||_{r,inf} + ||v||_{r,inf})``; at most ``2^{1/r}``."""
    denom = weak_norm(u, r) + weak_norm(v, r)
    if denom == 0:
        raise ValueError("both functions have zero norm")
    return weak_norm(u + v, r) / denom
