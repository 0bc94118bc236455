"""Disjointly supported families and the failure of superadditivity.

The standard family is ``u_k = s_k^{-1/r} chi_{E_k}`` with ``s_{k+1} = ratio * s_k``
and ``ratio <= 1/2``; every member has unit weak norm while the weak norm of
the sum stays bounded, so ``sum ||u_k||^gamma <= C ||sum u_k||^gamma`` fails
for large enough ``m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import reals
from .lorentz import DOUBLE_STAR, STAR, LorentzExponents, norm
from .measure import (
    StepFunction,
    combine_pointwise,
    disjoint_sum,
    make_step,
    maximal_profile,
    rearrange,
    restrict_to_support,
    supports_disjoint,
)


@dataclass(frozen=True)
class DisjointFamily:
    members: tuple[StepFunction, ...]
    support_measures: tuple[Fraction, ...]
    total_space: Fraction

    def __post_init__(self):
        if not self.members:
            raise ValueError("family must have at least one member")
        if any(f.total_space != self.total_space for f in self.members):
            raise ValueError("members live on different spaces")
        if sum(self.support_measures) > self.total_space:
            raise ValueError("support measures overflow total_space")
        if not supports_disjoint(self.members):
            raise ValueError("member supports overlap")

    def __len__(self) -> int:
        return len(self.members)

    def sum(self) -> StepFunction:
        return disjoint_sum(self.members)

    def tail_sums(self) -> tuple[Fraction, ...]:
        """``a_j = s_{j+1} + ... + s_m`` for ``j = 0..m``."""
        s = self.support_measures
        return tuple(sum(s[j:], Fraction(0)) for j in range(len(s) + 1))


@dataclass(frozen=True)
class SuperadditivityParams:
    gamma: float
    C: float

    def __post_init__(self):
        if not self.gamma > 0 or not self.C > 0:
            raise ValueError("gamma and C must be positive")

    def violated_by(self, family: DisjointFamily, r, kind=STAR) -> bool:
        return required_constant(family, r, self.gamma, kind) > self.C


def _kind(kind: str) -> str:
    return LorentzExponents(1, 1, kind).kind


def build_family(r, m: int, ratio=Fraction(1, 2), total_space=1) -> DisjointFamily:
    """Lay out ``u_k = s_k^{-1/r} chi_{E_k}``, ``k = 1..m``, left to right.

    ``s_1 = ratio * total_space`` and ``s_{k+1} = ratio * s_k``.
    """
    r = reals.as_exponent(r)
    ratio, total_space = Fraction(ratio), Fraction(total_space)
    if m < 1:
        raise ValueError("m must be a positive integer")
    if not 0 < ratio <= Fraction(1, 2):
        raise ValueError(f"ratio must lie in (0, 1/2], got {ratio}")
    inv_r = reals.reciprocal(r)
    s = [ratio * total_space]
    for _ in range(m - 1):
        s.append(ratio * s[-1])
    if sum(s) > total_space:
        raise ValueError("supports overflow total_space")
    members = []
    offset = Fraction(0)
    for sk in s:
        pieces = [(0, offset)] if offset else []
        pieces.append((reals.power(sk, -inv_r), sk))
        members.append(make_step(pieces, total_space))
        offset += sk
    return DisjointFamily(tuple(members), tuple(s), total_space)


def translates(u: StepFunction, count: int, total_space=None) -> DisjointFamily:
    """``count`` disjoint shifted copies of the compacted support of ``u``."""
    body = [pc for pc in u.pieces if pc.value != 0]
    width = sum((pc.measure for pc in body), Fraction(0))
    total_space = Fraction(total_space if total_space is not None else u.total_space)
    if width == 0:
        raise ValueError("u is zero")
    if count * width > total_space:
        raise ValueError(f"{count} copies of measure {width} do not fit in {total_space}")
    members = []
    for i in range(count):
        pieces = [(0, i * width)] if i else []
        pieces.extend(body)
        members.append(make_step(pieces, total_space))
    return DisjointFamily(tuple(members), (width,) * count, total_space)


def exact_weak_sum_power(family: DisjointFamily) -> Fraction:
    """``max_j a_{j-1} / s_j``: the ``r``-th power of the weak norm of the sum.

    Exact for :func:`build_family` output, whose members have value ``s_k^{-1/r}``.
    """
    a = family.tail_sums()
    s = family.support_measures
    return max(a[j] / s[j] for j in range(len(s)))


def sum_norm_bounds(family: DisjointFamily, r) -> tuple:
    """``(||sum u_k||_{L^{r,inf}}, ||sum u_k||_{L^{(r,inf)}})``."""
    total = family.sum()
    return norm(total, LorentzExponents.weak(r, STAR)), norm(total, LorentzExponents.weak(r, DOUBLE_STAR))


def required_constant(family: DisjointFamily, r, gamma, kind=STAR):
    """Smallest ``C`` with ``sum ||u_k||^gamma <= C ||sum u_k||^gamma`` for this family."""
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    e = LorentzExponents.weak(r, _kind(kind))
    gamma = reals.real(gamma)
    lhs = sum((norm(f, e) ** gamma for f in family.members), reals.real(0))
    return lhs / norm(family.sum(), e) ** gamma


def constant_series(r, m_max: int, gamma=1, kind=STAR, ratio=Fraction(1, 2), total_space=1) -> list:
    """``required_constant`` of ``build_family(r, m)`` for ``m = 1..m_max``."""
    return [
        required_constant(build_family(r, m, ratio, total_space), r, gamma, kind) for m in range(1, m_max + 1)
    ]


# -- proof trace for maximal non-compactness --------------------------------


def eta_for(rho, eps, r, kind) -> float:
    """Smallest admissible ``eta`` with ``0 >= rho (1 - eta^{-1/r}) >= -eps``; 0 for double-star."""
    if _kind(kind) == DOUBLE_STAR:
        return 0.0
    return (1 + eps / rho) ** (-float(r))


def ell_required(norm_I, eps, r, eta) -> int:
    """Least ``ell`` with ``(ell (1 - eta))^{1/r} >= 2^{1+1/r} ||I|| / eps``."""
    r = float(r)
    target = (2 ** (1 + 1 / r) * norm_I / eps) ** r / (1 - eta)
    ell = max(1, math.ceil(target))
    while ell > 1 and ((ell - 1) * (1 - eta)) ** (1 / r) >= 2 ** (1 + 1 / r) * norm_I / eps:
        ell -= 1
    while (ell * (1 - eta)) ** (1 / r) < 2 ** (1 + 1 / r) * norm_I / eps:
        ell += 1
    return ell


@dataclass
class WitnessReport:
    kind: str
    r: float
    rho: float
    eps: float
    eta: float
    norm_I: float
    ell_required: int
    distances: list  # distances[k][c] = ||center_c - member_k||_Y
    uncovered: list  # members at distance >= rho from every center
    center: int | None = None
    group: list = field(default_factory=list)
    t0: float | None = None
    w_norm: float | None = None
    v_norm: float | None = None
    center_norm: float | None = None
    lower_bound: float | None = None
    upper_bound: float = 0.0
    pointwise_lower: float | None = None
    pointwise_lower_required: float | None = None
    lattice_chain_holds: bool | None = None
    lower_bound_holds: bool | None = None
    contradiction: bool = False

    @property
    def cover_refuted(self) -> bool:
        return bool(self.uncovered)


def _ell_factor(ell: int, eta: float, r, kind) -> float:
    if _kind(kind) == DOUBLE_STAR:
        return 2 * ell ** (1 / float(r))
    return (ell * (1 - eta)) ** (1 / float(r))


def _pick_t0(member: StepFunction, level: float, r, kind):
    """A ``t_0`` with ``t_0^{1/r} u*(t_0) > level`` (or ``u**`` for double-star)."""
    inv_r = 1 / float(r)
    prof = rearrange(member)
    if _kind(kind) == DOUBLE_STAR:
        best = None
        for seg in maximal_profile(prof).segments:
            for t in (seg.start, seg.end):
                if t > 0:
                    val = float(seg.value(t)) * float(t) ** inv_r
                    if best is None or val > best[0]:
                        best = (val, Fraction(t))
        return best[1] if best and best[0] > level else None
    for i, lv in enumerate(prof.levels):
        lo, hi = prof.breakpoints[i], prof.breakpoints[i + 1]
        need = (level / float(lv)) ** float(r)  # t^{1/r} lv > level  <=>  t > need
        if need < hi:
            t0 = (max(Fraction(need), lo) + hi) / 2
            if float(t0) ** inv_r * float(lv) > level:
                return t0
    return None


def maximal_noncompactness_witness(
    family: DisjointFamily,
    centers: Sequence[StepFunction],
    rho,
    r,
    kind=STAR,
    *,
    eps,
    norm_I=1.0,
    eta=None,
    enforce_pigeonhole: bool = True,
) -> WitnessReport:
    """Run the pigeonhole / truncation argument on concrete data.

    The members play the role of unit-ball elements of norm ``> rho + 2 eps``
    in the target space; ``norm_I`` is the declared embedding norm.  Every
    member is assigned to the centers within ``rho``.  Members no center
    captures are reported as ``uncovered``: they refute the cover outright.
    Otherwise the center capturing the largest group is truncated to the
    group supports, ``w`` is assembled from the smaller-in-magnitude
    selections, and both bounds on ``||w||`` are evaluated.

    ``enforce_pigeonhole=False`` skips the family-size check, so the
    truncation step can be traced on families too small to force a capture.
    """
    kind = _kind(kind)
    rho, eps, norm_I = float(rho), float(eps), float(norm_I)
    if not (rho > 0 and eps > 0 and norm_I > 0):
        raise ValueError("rho, eps and norm_I must be positive")
    e = LorentzExponents.weak(r, kind)
    member_norms = [float(norm(f, e)) for f in family.members]
    if min(member_norms) <= rho + 2 * eps:
        raise ValueError(
            f"every member needs norm > rho + 2 eps = {rho + 2 * eps}; smallest is {min(member_norms)}"
        )
    if rho + 2 * eps >= norm_I:
        raise ValueError("need rho + 2 eps < ||I||")
    if eta is None:
        eta = eta_for(rho, eps, r, kind)
    if kind == STAR and not (0 < eta < 1 and -eps <= rho * (1 - eta ** (-1 / float(r))) <= 0):
        raise ValueError(f"eta={eta} violates 0 >= rho (1 - eta^(-1/r)) >= -eps")
    if kind == DOUBLE_STAR:
        eta = 0.0
    need = ell_required(norm_I, eps, r, eta)
    n_centers = max(1, len(centers))
    if enforce_pigeonhole and len(family) < n_centers * need:
        raise ValueError(
            f"family has {len(family)} members; pigeonhole needs {n_centers} * {need} = {n_centers * need}"
        )

    distances = [[float(norm(c - f, e)) for c in centers] for f in family.members]
    uncovered = [k for k, row in enumerate(distances) if all(d >= rho for d in row)]
    upper = 2 ** (1 + 1 / float(r)) * norm_I
    report = WitnessReport(
        kind=kind,
        r=float(r),
        rho=rho,
        eps=eps,
        eta=eta,
        norm_I=norm_I,
        ell_required=need,
        distances=distances,
        uncovered=uncovered,
        upper_bound=upper,
    )
    if not centers:
        return report
    counts = [sum(1 for row in distances if row[c] < rho) for c in range(len(centers))]
    best = max(range(len(centers)), key=lambda c: counts[c])
    if counts[best] == 0:
        return report
    group = [k for k, row in enumerate(distances) if row[best] < rho]
    members = [family.members[k] for k in group]
    profiles = [rearrange(f) for f in members]
    if not all(p.same_as(profiles[0]) for p in profiles[1:]):
        raise ValueError("captured members must be equimeasurable (use translates())")
    center = centers[best]
    v_parts = [restrict_to_support(center, f) for f in members]
    w_parts = [combine_pointwise(f, vk, "select_smaller") for f, vk in zip(members, v_parts)]
    w = disjoint_sum(w_parts)
    v = disjoint_sum(v_parts)
    ell = len(group)
    report.center = best
    report.group = group
    report.w_norm = float(norm(w, e))
    report.v_norm = float(norm(v, e))
    report.center_norm = float(norm(center, e))
    report.lower_bound = eps * _ell_factor(ell, eta, r, kind)
    tol = 1e-12 * max(1.0, report.center_norm)
    report.lattice_chain_holds = report.w_norm <= report.v_norm + tol and report.v_norm <= report.center_norm + tol
    report.lower_bound_holds = report.w_norm > report.lower_bound * (1 - 1e-12)
    report.contradiction = report.lower_bound > upper

    t0 = _pick_t0(members[0], rho + 2 * eps, r, kind)
    if t0 is not None:
        report.t0 = float(t0)
        point = Fraction(ell) * t0 * Fraction(1 - eta).limit_denominator(10**12)
        w_prof = rearrange(w)
        if kind == DOUBLE_STAR:
            report.pointwise_lower = float(w_prof.integral(point)) / float(point)
            report.pointwise_lower_required = 2 * eps * float(t0) ** (-1 / float(r))
        else:
            report.pointwise_lower = float(w_prof.value(point))
            report.pointwise_lower_required = eps * float(t0) ** (-1 / float(r))
    return report
