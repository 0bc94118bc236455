"""Step functions on a finite interval ``(0, |Omega|)`` and their rearrangements.

A :class:`StepFunction` is a finite list of pieces laid out left to right,
each a constant value on an interval of exact rational length.  Whatever is
left of ``(0, total_space)`` after the last piece carries the value 0.

All objects here are immutable; every operation returns a new object.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from typing import Iterable, NamedTuple, Sequence

from . import reals


class Piece(NamedTuple):
    value: float
    measure: Fraction


def _as_measure(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError(f"measures must be exact rationals, got float {x!r}")
    return Fraction(x)


@dataclass(frozen=True)
class StepFunction:
    """Piecewise-constant function on ``(0, total_space)``.

    Use :func:`make_step` to build one; the constructor assumes its input is
    already canonical (positive measures, adjacent equal values merged, no
    trailing zero pieces).
    """

    pieces: tuple[Piece, ...]
    total_space: Fraction

    @property
    def support_measure(self) -> Fraction:
        return sum((pc.measure for pc in self.pieces if pc.value != 0), Fraction(0))

    @property
    def occupied(self) -> Fraction:
        """Length of the laid-out part, zero gaps included."""
        return sum((pc.measure for pc in self.pieces), Fraction(0))

    @property
    def residual(self) -> Fraction:
        return self.total_space - self.occupied

    def partition(self) -> tuple[Fraction, ...]:
        """Left-to-right breakpoints ``0 = x_0 < ... < x_N = total_space``."""
        cuts = [Fraction(0), *accumulate(pc.measure for pc in self.pieces)]
        if cuts[-1] < self.total_space:
            cuts.append(self.total_space)
        return tuple(cuts)

    def intervals(self) -> list[tuple[Fraction, Fraction, float]]:
        """``(start, end, value)`` for every piece, the zero residual included."""
        out = []
        x = Fraction(0)
        for pc in self.pieces:
            out.append((x, x + pc.measure, pc.value))
            x += pc.measure
        if x < self.total_space:
            out.append((x, self.total_space, reals.real(0)))
        return out

    def value_at(self, x) -> float:
        """Value on the half-open cell ``[start, end)`` containing ``x``."""
        x = Fraction(x)
        if not 0 <= x < self.total_space:
            raise ValueError(f"x={x} outside (0, {self.total_space})")
        for start, end, value in self.intervals():
            if start <= x < end:
                return value
        raise AssertionError("unreachable")

    def is_zero(self) -> bool:
        return not self.pieces

    def integral_abs(self):
        return sum((abs(pc.value) * reals.real(pc.measure) for pc in self.pieces), reals.real(0))

    def scale(self, factor) -> "StepFunction":
        factor = reals.real(factor)
        return make_step([(factor * pc.value, pc.measure) for pc in self.pieces], self.total_space)

    def __neg__(self) -> "StepFunction":
        return self.scale(-1)

    def __abs__(self) -> "StepFunction":
        return combine_pointwise(self, None, "abs")

    def __add__(self, other: "StepFunction") -> "StepFunction":
        return combine_pointwise(self, other, "add")

    def __sub__(self, other: "StepFunction") -> "StepFunction":
        return combine_pointwise(self, other, "sub")

    def support_intervals(self) -> list[tuple[Fraction, Fraction]]:
        merged: list[tuple[Fraction, Fraction]] = []
        for start, end, value in self.intervals():
            if value == 0:
                continue
            if merged and merged[-1][1] == start:
                merged[-1] = (merged[-1][0], end)
            else:
                merged.append((start, end))
        return merged

    def to_json(self) -> dict:
        return {
            "pieces": [[float(pc.value), str(pc.measure)] for pc in self.pieces],
            "total_space": str(self.total_space),
        }

    @classmethod
    def from_json(cls, data: dict) -> "StepFunction":
        pieces = [(float(v), Fraction(str(m))) for v, m in data.get("pieces", [])]
        return make_step(pieces, Fraction(str(data.get("total_space", 1))))


def make_step(pieces: Iterable[tuple], total_space=1) -> StepFunction:
    """Build a canonical :class:`StepFunction`.

    ``pieces`` is an iterable of ``(value, measure)`` pairs laid out from the
    left.  Measures must be positive rationals summing to at most
    ``total_space``.  Zero-valued pieces are kept as gaps, except at the end.

    >>> make_step([(3, Fraction(1, 2)), (1, Fraction(1, 4))]).residual
    Fraction(1, 4)
    """
    total_space = _as_measure(total_space)
    if total_space <= 0:
        raise ValueError("total_space must be positive")
    merged: list[Piece] = []
    used = Fraction(0)
    for value, measure in pieces:
        measure = _as_measure(measure)
        if measure <= 0:
            raise ValueError(f"piece measure must be positive, got {measure}")
        value = reals.real(value)
        used += measure
        if merged and merged[-1].value == value:
            merged[-1] = Piece(value, merged[-1].measure + measure)
        else:
            merged.append(Piece(value, measure))
    if used > total_space:
        raise ValueError(f"pieces occupy {used} > total_space {total_space}")
    while merged and merged[-1].value == 0:
        merged.pop()
    return StepFunction(tuple(merged), total_space)


def zero(total_space=1) -> StepFunction:
    return make_step([], total_space)


def indicator(measure, value=1, total_space=1, offset=0) -> StepFunction:
    """``value`` times the indicator of ``[offset, offset + measure)``."""
    offset = _as_measure(offset)
    pieces = [(0, offset)] if offset else []
    pieces.append((value, measure))
    return make_step(pieces, total_space)


# -- rearrangements ---------------------------------------------------------


@dataclass(frozen=True)
class RearrangedProfile:
    """Nonincreasing rearrangement ``u*`` as a right-continuous staircase.

    ``u*(t) = levels[i]`` for ``breakpoints[i] <= t < breakpoints[i + 1]`` and
    ``u*(t) = 0`` from ``breakpoints[-1]`` on.  Levels are strictly
    decreasing and positive.
    """

    breakpoints: tuple[Fraction, ...]
    levels: tuple[float, ...]
    total_space: Fraction

    @property
    def support(self) -> Fraction:
        return self.breakpoints[-1]

    def value(self, t) -> float:
        t = Fraction(t)
        if t < 0:
            raise ValueError("t must be nonnegative")
        for i, level in enumerate(self.levels):
            if t < self.breakpoints[i + 1]:
                return level
        return reals.real(0)

    def distribution(self, level) -> Fraction:
        """``|{u* > level}|`` for ``level >= 0``."""
        out = Fraction(0)
        for i, lv in enumerate(self.levels):
            if lv > level:
                out = self.breakpoints[i + 1]
        return out

    def integral(self, t):
        """``int_0^t u*(s) ds`` for ``t >= 0`` (``t`` may exceed ``total_space``)."""
        t = Fraction(t)
        acc = reals.real(0)
        for i, level in enumerate(self.levels):
            a, b = self.breakpoints[i], self.breakpoints[i + 1]
            if t <= a:
                break
            acc += level * reals.real(min(t, b) - a)
        return acc

    def maximal(self) -> "MaximalProfile":
        return maximal_profile(self)

    def same_as(self, other: "RearrangedProfile") -> bool:
        return self.breakpoints == other.breakpoints and self.levels == other.levels


def rearrange(u: StepFunction) -> RearrangedProfile:
    """Nonincreasing rearrangement of ``|u|``.

    >>> prof = rearrange(make_step([(1, Fraction(1, 4)), (3, Fraction(1, 2))]))
    >>> prof.levels, prof.breakpoints
    ((3.0, 1.0), (Fraction(0, 1), Fraction(1, 2), Fraction(3, 4)))
    """
    mass: dict = {}
    for pc in u.pieces:
        a = abs(pc.value)
        if a != 0:
            mass[a] = mass.get(a, Fraction(0)) + pc.measure
    levels = sorted(mass, reverse=True)
    breakpoints = [Fraction(0), *accumulate(mass[lv] for lv in levels)]
    return RearrangedProfile(tuple(breakpoints), tuple(levels), u.total_space)


@dataclass(frozen=True)
class MaximalSegment:
    start: Fraction
    end: Fraction
    offset: float  # K: u**(t) = (offset + level * t) / t on (start, end]
    level: float

    def value(self, t):
        return (self.offset + self.level * reals.real(t)) / reals.real(t)


@dataclass(frozen=True)
class MaximalProfile:
    """Maximal rearrangement ``u**`` on ``(0, total_space]``.

    On each segment ``(start, end]``, ``u**(t) = (K + c t) / t``; the first
    segment has ``K = 0``.  The last segment, after the support of ``u*``,
    has ``c = 0``.  Beyond ``total_space`` the last formula keeps holding.
    """

    segments: tuple[MaximalSegment, ...]
    total_space: Fraction
    total_integral: float

    def value(self, t):
        t = Fraction(t)
        if t <= 0:
            raise ValueError("u** is defined for t > 0")
        for seg in self.segments:
            if t <= seg.end:
                return seg.value(t)
        return self.total_integral / reals.real(t)


def maximal_profile(profile: RearrangedProfile) -> MaximalProfile:
    segs = []
    acc = reals.real(0)
    for i, level in enumerate(profile.levels):
        a, b = profile.breakpoints[i], profile.breakpoints[i + 1]
        segs.append(MaximalSegment(a, b, acc - level * reals.real(a), level))
        acc += level * reals.real(b - a)
    if profile.support < profile.total_space:
        segs.append(MaximalSegment(profile.support, profile.total_space, acc, reals.real(0)))
    return MaximalProfile(tuple(segs), profile.total_space, acc)


def maximal_value(u: StepFunction, t):
    """``u**(t) = (1/t) int_0^t u*``; ``t`` beyond ``|Omega|`` is allowed."""
    t = Fraction(t)
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    return rearrange(u).integral(t) / reals.real(t)


# -- pointwise algebra ------------------------------------------------------


def common_partition(functions: Sequence[StepFunction]) -> tuple[Fraction, ...]:
    spaces = {f.total_space for f in functions}
    if len(spaces) != 1:
        raise ValueError(f"mismatched total_space: {sorted(spaces)}")
    cuts = set()
    for f in functions:
        cuts.update(f.partition())
    return tuple(sorted(cuts))


def _cell_values(f: StepFunction, cuts: Sequence[Fraction]) -> list:
    """Value of ``f`` on each cell ``[cuts[i], cuts[i+1])`` of a refinement."""
    out = []
    ivs = f.intervals()
    k = 0
    for i in range(len(cuts) - 1):
        a = cuts[i]
        while ivs[k][1] <= a:
            k += 1
        out.append(ivs[k][2])
    return out


def _select_smaller(a, b):
    # ties go to the second argument
    return b if abs(a) >= abs(b) else a


_OPS = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "abs": lambda a, b: abs(a),
    "select_smaller": _select_smaller,
    "restrict": lambda a, b: a if b != 0 else 0 * a,
}


def combine_pointwise(u: StepFunction, v: StepFunction | None, op: str) -> StepFunction:
    """Apply ``op`` cell by cell on the common refinement of ``u`` and ``v``.

    ``op`` is one of ``add``, ``sub``, ``abs`` (``|u|``; ``v`` is ignored),
    ``select_smaller`` (``v`` where ``|u| >= |v|``, otherwise ``u``) and
    ``restrict`` (``u`` on the support of ``v``, zero elsewhere).
    """
    key = op.replace("-", "_")
    if key == "select_smaller_in_magnitude":
        key = "select_smaller"
    if key not in _OPS:
        raise ValueError(f"unknown op {op!r}")
    if v is None:
        if key != "abs":
            raise ValueError(f"op {op!r} needs two functions")
        v = zero(u.total_space)
    cuts = common_partition([u, v])
    fn = _OPS[key]
    vals = zip(_cell_values(u, cuts), _cell_values(v, cuts))
    pieces = [(fn(a, b), cuts[i + 1] - cuts[i]) for i, (a, b) in enumerate(vals)]
    return make_step(pieces, u.total_space)


def restrict_to_support(u: StepFunction, mask: StepFunction) -> StepFunction:
    """``u * chi_{supp mask}``."""
    return combine_pointwise(u, mask, "restrict")


def pointwise_sum(functions: Sequence[StepFunction]) -> StepFunction:
    if not functions:
        raise ValueError("need at least one function")
    cuts = common_partition(functions)
    columns = [_cell_values(f, cuts) for f in functions]
    pieces = [(sum(col[i] for col in columns), cuts[i + 1] - cuts[i]) for i in range(len(cuts) - 1)]
    return make_step(pieces, functions[0].total_space)


def supports_disjoint(functions: Sequence[StepFunction]) -> bool:
    ivs = sorted(iv for f in functions for iv in f.support_intervals())
    return all(ivs[i][1] <= ivs[i + 1][0] for i in range(len(ivs) - 1))


def disjoint_sum(functions: Sequence[StepFunction]) -> StepFunction:
    """Sum of functions with pairwise disjoint supports."""
    if not supports_disjoint(functions):
        raise ValueError("supports overlap")
    return pointwise_sum(functions)


def ess_bounds(u: StepFunction) -> tuple:
    """``(ess inf, ess sup)``, counting the zero residual when it has positive measure."""
    values = [pc.value for pc in u.pieces]
    if u.residual > 0 or not values:
        values.append(reals.real(0))
    return min(values), max(values)


def dominated(u: StepFunction, v: StepFunction) -> bool:
    """``|u| <= |v|`` almost everywhere."""
    cuts = common_partition([u, v])
    return all(abs(a) <= abs(b) for a, b in zip(_cell_values(u, cuts), _cell_values(v, cuts)))


def random_step(rng, max_pieces: int = 6, total_space=1, denominator: int = 64) -> StepFunction:
    """A random step function for randomized checks.

    ``rng`` is a :class:`random.Random`.  Values are drawn from a small grid so
    that ties (and therefore merged levels) actually occur; some pieces are
    zero gaps.
    """
    total_space = Fraction(total_space)
    n = rng.randint(1, max_pieces)
    cuts = sorted(rng.sample(range(1, denominator), min(n, denominator - 1)))
    if rng.random() < 0.5:
        cuts.append(denominator)
    widths = [Fraction(b - a, denominator) * total_space for a, b in zip([0, *cuts], cuts)]
    grid = [0, 0.5, 1, 1.5, 2, 3, -1, -2.5]
    pieces = [(rng.choice(grid) if rng.random() < 0.5 else rng.uniform(-4, 4), w) for w in widths]
    return make_step(pieces, total_space)
