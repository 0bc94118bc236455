"""Covering nets for the identity ``l^p -> l^inf`` and refutation witnesses.

Upper bound: constant sequences ``lambda_k = sigma k / (2m)``, ``k = -m..m``,
with ``sigma = 2^{1-1/p}`` cover the unit ball of ``l^p`` by ``l^inf`` balls
of any radius ``rho > sigma/2``.

Lower bound: for ``rho < 2^{-1/p}`` and any ``c`` centers, some difference
``w_{i,j} = 2^{-1/p}(e^i - e^j)`` with ``i < j <= 2^{c+1}`` is at distance
``>= rho`` from all of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import reals


@dataclass(frozen=True)
class FiniteSeq:
    """Eventually constant sequence: ``entries`` followed by ``tail`` forever.

    Elements of ``l^p`` have ``tail == 0``; a nonzero tail is only for
    ``l^inf`` centers such as constant sequences.
    """

    entries: tuple[float, ...] = ()
    tail: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(float(x) for x in self.entries))
        object.__setattr__(self, "tail", float(self.tail))

    @classmethod
    def constant(cls, level: float) -> "FiniteSeq":
        return cls((), level)

    @classmethod
    def unit(cls, j: int, scale: float = 1.0) -> "FiniteSeq":
        """``scale * e^j`` with 1-based ``j``."""
        entries = [0.0] * j
        entries[j - 1] = scale
        return cls(tuple(entries))

    def coord(self, j: int) -> float:
        """1-based coordinate."""
        return self.entries[j - 1] if j <= len(self.entries) else self.tail

    def lp_norm(self, p) -> float:
        p = reals.as_exponent(p)
        if reals.is_inf(p):
            return max([abs(x) for x in self.entries] + [abs(self.tail)])
        if self.tail != 0:
            return math.inf
        p = float(p)
        return sum(abs(x) ** p for x in self.entries) ** (1 / p)

    def sup(self) -> float:
        return max([*self.entries, self.tail])

    def inf(self) -> float:
        return min([*self.entries, self.tail])

    def distance_inf(self, other: "FiniteSeq") -> float:
        n = max(len(self.entries), len(other.entries))
        diffs = [abs(self.coord(j) - other.coord(j)) for j in range(1, n + 1)]
        return max(diffs + [abs(self.tail - other.tail)])

    def to_json(self) -> dict:
        return {"entries": list(self.entries), "tail": self.tail}

    @classmethod
    def from_json(cls, data) -> "FiniteSeq":
        if isinstance(data, (int, float)):
            return cls.constant(data)
        if isinstance(data, list):
            return cls(tuple(data))
        return cls(tuple(data.get("entries", ())), data.get("tail", 0.0))


def sigma_lp(p) -> float:
    """Span ``2^{1-1/p}`` of the unit ball of ``l^p`` inside ``l^inf``."""
    p = reals.as_exponent(p)
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    return 2.0 ** (1 - float(reals.reciprocal(p)))


def alpha_lp(p) -> float:
    """``2^{-1/p}``, the measure of non-compactness of ``l^p -> l^inf``."""
    return sigma_lp(p) / 2


@dataclass(frozen=True)
class CoverNet:
    radius: float
    sigma: float
    m: int
    levels: tuple[float, ...]  # lambda_{-m}, ..., lambda_m

    def __len__(self) -> int:
        return len(self.levels)

    @property
    def centers(self) -> list[FiniteSeq]:
        return [FiniteSeq.constant(lv) for lv in self.levels]

    def level(self, k: int) -> float:
        return self.levels[k + self.m]


def _net_ok(m: int, sigma: float, rho: float) -> bool:
    return (1 + 1 / m) * sigma / 2 < rho


def build_constant_net(sigma: float, rho: float) -> CoverNet:
    """Constant net for the smallest ``m`` with ``(1 + 1/m) sigma/2 < rho``."""
    sigma, rho = float(sigma), float(rho)
    if not rho > sigma / 2:
        raise ValueError(f"no finite constant net at rho={rho} <= sigma/2={sigma / 2}")
    m = max(1, math.floor(sigma / (2 * rho - sigma)))
    while m > 1 and _net_ok(m - 1, sigma, rho):
        m -= 1
    while not _net_ok(m, sigma, rho):
        m += 1
    levels = tuple(sigma * k / (2 * m) for k in range(-m, m + 1))
    return CoverNet(rho, sigma, m, levels)


def locate(y: FiniteSeq, p, net: CoverNet) -> int:
    """Index ``k`` in ``-m..m`` with ``||y - lambda_k||_inf < rho``.

    Follows the case split on ``inf y``.  ``y`` must lie in the closed unit
    ball of ``l^p``.
    """
    if y.tail != 0:
        raise ValueError("y must be finitely supported")
    if y.lp_norm(p) > 1 + 1e-12:
        raise ValueError(f"||y||_p = {y.lp_norm(p)} > 1")
    sigma, m = net.sigma, net.m
    lo, hi = y.inf(), y.sup()
    if hi - lo > sigma * (1 + 1e-12):
        raise AssertionError(f"span {hi - lo} exceeds sigma {sigma}")
    if lo <= -sigma:
        k = -m
    elif lo > 0:
        k = m
    else:
        # unique k with inf y + sigma/2 in (lambda_{k-1}, lambda_k]
        k = math.ceil((lo + sigma / 2) * 2 * m / sigma)
        k = min(max(k, -m + 1), m)
    if y.distance_inf(FiniteSeq.constant(net.level(k))) < net.radius:
        return k
    for kk in (k - 1, k + 1):  # guard against rounding at a cell boundary
        if -m <= kk <= m and y.distance_inf(FiniteSeq.constant(net.level(kk))) < net.radius:
            return kk
    raise RuntimeError(f"no center covers {y}; this is a bug")


@dataclass(frozen=True)
class RefutationWitness:
    i: int
    j: int
    sequence: FiniteSeq
    distances: tuple[float, ...]
    ell: int
    pairs_scanned: int


def refute_radius(p, centers: Sequence[FiniteSeq], rho) -> RefutationWitness:
    """Find ``w_{i,j}`` at ``l^inf`` distance ``>= rho`` from every center.

    The scan runs over ``i < j <= ell = 2^{len(centers)+1}`` in
    lexicographic order.  Coordinates past every center's entries all look
    alike, so only the first ``len + 2`` indices need to be visited.
    """
    rho = float(rho)
    a = alpha_lp(p)
    if not rho < a:
        raise ValueError(f"rho={rho} must be < 2^(-1/p)={a}")
    centers = list(centers)
    ell = 2 ** (len(centers) + 1)
    width = max([len(c.entries) for c in centers] + [0])
    ell_eff = min(ell, width + 2)
    n = max(width, ell_eff)
    if not centers:
        seq = FiniteSeq((a, -a))
        return RefutationWitness(1, 2, seq, (), ell, 1)

    idx = np.arange(ell_eff)
    I, J = idx[:, None], idx[None, :]
    best = np.full((ell_eff, ell_eff), np.inf)
    for c in centers:
        V = np.array([c.coord(t) for t in range(1, n + 1)])
        tail = abs(c.tail)
        # max |V_t| over t outside {i, j}: the first of the top three not in the pair
        top = np.argsort(-np.abs(V), kind="stable")[:3]
        rest = np.full((ell_eff, ell_eff), tail)
        done = np.zeros((ell_eff, ell_eff), dtype=bool)
        for t in top:
            hit = ~done & (I != t) & (J != t)
            rest[hit] = max(abs(V[t]), tail)
            done |= hit
        vi = V[:ell_eff]
        dist = np.maximum(np.maximum(np.abs(a - vi)[:, None], np.abs(a + vi)[None, :]), rest)
        best = np.minimum(best, dist)
    upper = np.triu(np.ones((ell_eff, ell_eff), dtype=bool), 1)
    hits = np.argwhere(upper & (best >= rho))
    if len(hits) == 0:
        raise RuntimeError("no witness found; the coloring bound guarantees one, so this is a bug")
    i0, j0 = (int(x) for x in hits[0])
    entries = [0.0] * (j0 + 1)
    entries[i0], entries[j0] = a, -a
    seq = FiniteSeq(tuple(entries))
    dists = tuple(seq.distance_inf(c) for c in centers)
    if min(dists) < rho:
        raise RuntimeError("witness check failed; this is a bug")
    scanned = sum(ell_eff - 1 - i for i in range(i0)) + (j0 - i0)
    return RefutationWitness(i0 + 1, j0 + 1, seq, dists, ell, scanned)


def adversarial_covers(p, rho, seed: int = 0, max_centers: int = 7) -> list[list[FiniteSeq]]:
    """Candidate covers used to exercise the lower bound."""
    sigma = sigma_lp(p)
    a = alpha_lp(p)
    covers: list[list[FiniteSeq]] = [[], [FiniteSeq()]]
    for m in (1, 2, 3):
        covers.append([FiniteSeq.constant(sigma * k / (2 * m)) for k in range(-m, m + 1)])
    # centers halfway between the pieces of the difference family
    covers.append([FiniteSeq.unit(j, a / 2) for j in range(1, max_centers + 1)])
    covers.append([FiniteSeq((a / 2, -a / 2)), FiniteSeq((-a / 2, a / 2)), FiniteSeq((0.0, 0.0), rho / 2)])
    rng = np.random.default_rng(seed)
    for size in (2, 4, max_centers):
        covers.append(
            [FiniteSeq(tuple(rng.uniform(-a, a, size=6)), rng.uniform(-sigma / 2, sigma / 2)) for _ in range(size)]
        )
    return covers


def sample_unit_ball(p, count: int, seed: int = 0, max_len: int = 8) -> list[FiniteSeq]:
    """Pseudo-random points of the closed unit ball of ``l^p`` plus extremal two-point sequences."""
    rng = np.random.default_rng(seed)
    pts = []
    a = alpha_lp(p)
    for i in range(1, max_len + 1):
        pts.append(FiniteSeq.unit(i, 1.0))
        pts.append(FiniteSeq.unit(i, -1.0))
        for j in range(i + 1, max_len + 1):
            e = [0.0] * j
            e[i - 1], e[j - 1] = a, -a
            pts.append(FiniteSeq(tuple(e)))
            e[i - 1], e[j - 1] = -a, a
            pts.append(FiniteSeq(tuple(e)))
    X = rng.standard_normal((count, max_len))
    X *= rng.random((count, max_len)) < 0.6
    if reals.is_inf(reals.as_exponent(p)):
        norms = np.abs(X).max(axis=1)
    else:
        pf = float(reals.as_exponent(p))
        norms = (np.abs(X) ** pf).sum(axis=1) ** (1 / pf)
    radii = np.where(rng.random(count) < 0.2, 1.0, rng.random(count))
    for x, nrm, rad in zip(X, norms, radii):
        if nrm == 0:
            pts.append(FiniteSeq())
            continue
        y = x * (rad / nrm)
        y = y / max(1.0, float(FiniteSeq(tuple(y)).lp_norm(p)))
        pts.append(FiniteSeq(tuple(y)))
    return pts


@dataclass
class AlphaBracket:
    p: Fraction | float
    eps: float
    lower: float
    upper: float
    net_size: int
    samples_covered: int
    witnesses: list = field(default_factory=list)

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper


def alpha_bracket(p, eps: float, seed: int = 0, samples: int = 10_000) -> AlphaBracket:
    """Two-sided estimate of ``alpha(l^p -> l^inf)`` of half-width ``eps``."""
    p = reals.as_exponent(p)
    if p < 1 or not eps > 0:
        raise ValueError("need p >= 1 and eps > 0")
    a = alpha_lp(p)
    sigma = sigma_lp(p)

    rho_lo = a - eps
    witnesses = [refute_radius(p, cover, rho_lo) for cover in adversarial_covers(p, rho_lo, seed)]

    rho_hi = a + eps
    pts = sample_unit_ball(p, samples, seed)
    if rho_hi >= 1.0:
        # the unit ball around 0 already covers, radius ||I|| = 1
        upper, net_size = 1.0, 1
        covered = sum(1 for y in pts if y.lp_norm(reals.INF) <= 1.0)
    else:
        net = build_constant_net(sigma, rho_hi)
        for y in pts:
            locate(y, p, net)
        upper, net_size, covered = rho_hi, len(net), len(pts)
    return AlphaBracket(p, eps, rho_lo, upper, net_size, covered, witnesses)
