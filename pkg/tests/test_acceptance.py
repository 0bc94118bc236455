"""Acceptance criteria, one test group per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the terminal summary prints
one PASS/FAIL line per criterion.
"""

from fractions import Fraction as F
import math
import random
import time

import pytest

from noncompact import reals
from noncompact.coloring import certify_lower_bound, color_recursive, min_colors_exhaustive, verify_coloring
from noncompact.covering import FiniteSeq, adversarial_covers, alpha_bracket, alpha_lp, build_constant_net, sigma_lp
from noncompact.covering import refute_radius
from noncompact.lorentz import DOUBLE_STAR, STAR, LorentzExponents, lorentz_norm, norm, weak_norm
from noncompact.measure import combine_pointwise, common_partition, make_step, maximal_value, random_step, rearrange
from noncompact.scaling import (
    SobolevParams,
    dilate,
    dilation_ratio,
    double_disjoint,
    doubling_ratio,
    elementary_inequality_check,
    p_star,
    span_and_alpha,
)
from noncompact.superadditivity import build_family, constant_series, exact_weak_sum_power, sum_norm_bounds

R_VALUES = [F(1, 2), F(1), F(3, 2), F(2), F(5)]
REL = 1e-12


def criterion(num, title):
    return pytest.mark.criterion(num, title)


# -- 1 ----------------------------------------------------------------------


@criterion(1, "unit norms")
@pytest.mark.parametrize("kind", [STAR, DOUBLE_STAR])
@pytest.mark.parametrize("r", R_VALUES, ids=str)
def test_c1_unit_norms(r, kind):
    start = time.perf_counter()
    family = build_family(r, 12, F(1, 2))
    e = LorentzExponents.weak(r, kind)
    got = [float(norm(u, e)) for u in family.members]
    elapsed = time.perf_counter() - start
    print(f"r={r} kind={kind} norms={got}")
    assert elapsed < 1.0
    assert got == pytest.approx([1.0] * 12, rel=REL)


# -- 2 ----------------------------------------------------------------------


@criterion(2, "sum bounds")
@pytest.mark.parametrize("r", R_VALUES, ids=str)
def test_c2_sum_bounds(r):
    family = build_family(r, 12, F(1, 2))
    inv_r = 1 / r
    assert exact_weak_sum_power(family) <= 2  # exact, at the breakpoints
    star, dstar = sum_norm_bounds(family, r)
    assert star == pytest.approx(float(exact_weak_sum_power(family)) ** float(inv_r), rel=REL)
    assert star <= 2 ** float(inv_r) * (1 + REL)
    if r > 1:
        assert dstar <= 4 * (1 + REL)
    else:
        l1 = float(reals.power(family.total_space, inv_r - 1)) * float(family.sum().integral_abs())
        assert dstar == pytest.approx(l1, rel=REL)


# -- 3 ----------------------------------------------------------------------


@criterion(3, "superadditivity divergence")
def test_c3_divergence_r2():
    start = time.perf_counter()
    series = [float(c) for c in constant_series(2, 20, 1, STAR)]
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    assert all(b > a for a, b in zip(series, series[1:]))
    assert series[13] <= 10 < series[14]
    assert series[14] == pytest.approx(15 / math.sqrt(2 - 2**-14), rel=REL)


@criterion(3, "superadditivity divergence")
def test_c3_bounded_r_half_double_star():
    start = time.perf_counter()
    series = [float(c) for c in constant_series(F(1, 2), 20, 1, DOUBLE_STAR)]
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    assert max(series) / min(series) <= 1.01


# -- 4 ----------------------------------------------------------------------


@criterion(4, "covering value")
@pytest.mark.parametrize("p", [F(1), F(3, 2), F(2), F(4)], ids=str)
def test_c4_alpha_bracket(p):
    start = time.perf_counter()
    br = alpha_bracket(p, 1e-3)
    elapsed = time.perf_counter() - start
    a = 2 ** (-1 / float(p))
    assert elapsed < 5.0
    assert br.lower <= a <= br.upper
    assert br.lower == pytest.approx(a - 1e-3) and br.upper == pytest.approx(a + 1e-3)
    assert br.samples_covered == 10_000 + 2 * 8 + 8 * 7
    # every adversarial cover at radius alpha - eps is refuted by an explicit sequence
    rho = a - 1e-3
    covers = adversarial_covers(p, rho)
    assert len(br.witnesses) == len(covers)
    for cover, w in zip(covers, br.witnesses):
        assert w.sequence.lp_norm(p) == pytest.approx(1.0, rel=REL)
        assert all(w.sequence.distance_inf(c) >= rho for c in cover)


@criterion(4, "covering value")
def test_c4_net_p1():
    net = build_constant_net(sigma_lp(1), 0.55)
    assert len(net) == 23


@criterion(4, "covering value")
@pytest.mark.parametrize("p", [F(1), F(2)], ids=str)
def test_c4_lower_witness(p):
    rho = alpha_lp(p) - 1e-3
    w = refute_radius(p, [FiniteSeq()], rho)
    assert w.sequence.distance_inf(FiniteSeq()) >= rho


# -- 5 ----------------------------------------------------------------------


@criterion(5, "coloring")
def test_c5_recursive_valid():
    for m in range(1, 12):
        assert verify_coloring(color_recursive(m)).ok
    start = time.perf_counter()
    c = color_recursive(12)
    ok = verify_coloring(c).ok
    elapsed = time.perf_counter() - start
    assert ok and elapsed < 20.0


@criterion(5, "coloring")
@pytest.mark.parametrize("side,expected", [(1, 1), (3, 2), (7, 3)])
def test_c5_exhaustive(side, expected):
    assert min_colors_exhaustive(side + 1) == expected


@criterion(5, "coloring")
def test_c5_certificate():
    for m in range(1, 13):
        assert certify_lower_bound(color_recursive(m)).bound == m


# -- 6 ----------------------------------------------------------------------


@criterion(6, "scaling identities")
@pytest.mark.parametrize("nkp", [(3, 1, F(2)), (5, 2, F(1)), (4, 3, F(1))], ids=str)
def test_c6_scaling(nkp):
    n, k, p = nkp
    rng = random.Random(n * 100 + k)
    ps = p_star(SobolevParams(n, k, p))
    assert F(-n) / ps == k - F(n) / p
    checked = 0
    while checked < 50:
        u = random_step(rng)
        if u.is_zero():
            continue
        checked += 1
        prm = SobolevParams(n, k, p, F(rng.randint(4, 16), 4))
        du = dilate(u, prm)
        shrink = prm.kappa**n
        assert rearrange(du).breakpoints == tuple(b / shrink for b in rearrange(u).breakpoints)
        for pp, q in ((ps, "inf"), (F(n, k), 1)):
            e = LorentzExponents(pp, q)
            ratio = float(lorentz_norm(du, e)) / float(lorentz_norm(u, e))
            assert ratio == pytest.approx(dilation_ratio(prm, pp), rel=REL)
        roomy = make_step(u.pieces, 2 * u.total_space)
        e = LorentzExponents(F(n, k), 1)
        ratio = float(lorentz_norm(double_disjoint(roomy), e)) / float(lorentz_norm(roomy, e))
        assert ratio == pytest.approx(doubling_ratio(prm), rel=REL)


# -- 7 ----------------------------------------------------------------------


@criterion(7, "span formulas")
def test_c7_span():
    assert span_and_alpha(SobolevParams(1, 1), 0.5) == (0.5, 0.25)
    for n in range(1, 7):
        for k in range(1, n + 1):
            for norm_i in (0.5, 1.0, 3.0):
                sigma, alpha = span_and_alpha(SobolevParams(n, k), norm_i)
                assert alpha < norm_i
                assert alpha == pytest.approx(sigma / 2, rel=REL)
                assert sigma == pytest.approx(2 ** (1 - k / n) * norm_i, rel=REL)


# -- 8 ----------------------------------------------------------------------

TRIALS = 1000


def _hl_sides(u, v):
    cuts = common_partition([u, v])
    lhs = sum(abs(u.value_at(a)) * abs(v.value_at(a)) * float(b - a) for a, b in zip(cuts, cuts[1:]))
    pu, pv = rearrange(u), rearrange(v)
    bps = sorted(set(pu.breakpoints) | set(pv.breakpoints))
    rhs = sum(pu.value(a) * pv.value(a) * float(b - a) for a, b in zip(bps, bps[1:]))
    return lhs, rhs


def _suite_star_subadditive(rng):
    u, v = random_step(rng), random_step(rng)
    t1, t2 = F(rng.randint(0, 60), 120), F(rng.randint(0, 60), 120)
    return rearrange(u + v).value(t1 + t2) <= rearrange(u).value(t1) + rearrange(v).value(t2) + 1e-12


def _suite_double_star_subadditive(rng):
    u, v = random_step(rng), random_step(rng)
    t = F(rng.randint(1, 150), 120)
    return maximal_value(u + v, t) <= maximal_value(u, t) + maximal_value(v, t) + 1e-12


def _suite_quasinorm(rng):
    u, v = random_step(rng), random_step(rng)
    r = rng.choice(R_VALUES)
    return weak_norm(u + v, r) <= 2 ** float(1 / r) * (weak_norm(u, r) + weak_norm(v, r)) * (1 + 1e-12)


def _suite_lattice(rng):
    u, v = random_step(rng), random_step(rng)
    w = combine_pointwise(u, v, "select_smaller")
    r, kind = rng.choice(R_VALUES), rng.choice([STAR, DOUBLE_STAR])
    return weak_norm(w, r, kind) <= weak_norm(u, r, kind) * (1 + 1e-12)


def _suite_dominates(rng):
    u = random_step(rng)
    p = rng.choice(R_VALUES)
    q = rng.choice([F(1), F(2), reals.INF]) if rng.random() < 0.1 else reals.INF
    return norm(u, LorentzExponents(p, q)) <= norm(u, LorentzExponents(p, q, DOUBLE_STAR)) * (1 + 1e-9)


def _suite_hardy_littlewood(rng):
    lhs, rhs = _hl_sides(random_step(rng), random_step(rng))
    return lhs <= rhs + 1e-12


def _suite_elementary(rng):
    n = rng.randint(1, 6)
    prm = SobolevParams(n, rng.randint(1, n))
    a, b = rng.uniform(0, 10), rng.uniform(0, 10)
    return elementary_inequality_check(a, b, prm) >= -1e-12 * (a + b)


SUITES = [
    _suite_star_subadditive,
    _suite_double_star_subadditive,
    _suite_quasinorm,
    _suite_lattice,
    _suite_dominates,
    _suite_hardy_littlewood,
    _suite_elementary,
]


@criterion(8, "property suites")
def test_c8_property_suites():
    start = time.perf_counter()
    violations = {}
    for i, suite in enumerate(SUITES):
        rng = random.Random(i)
        violations[suite.__name__] = sum(0 if suite(rng) else 1 for _ in range(TRIALS))
    elapsed = time.perf_counter() - start
    print(f"violations={violations} elapsed={elapsed:.2f}s")
    assert all(v == 0 for v in violations.values()), violations
    assert elapsed < 10.0
