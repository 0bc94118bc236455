"""Triangle coloring: color pairs ``(i, j)``, ``1 <= i < j <= ell``, so that for
every ``t`` the colors of row ``t`` (pairs ``(t, j)``) and column ``t``
(pairs ``(i, t)``) are disjoint.

``ell = 2^m`` needs exactly ``m`` colors.  Sufficiency comes from the
recursive construction, necessity from the row color sets, which must be
pairwise distinct and nonempty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np


class ColoringError(ValueError):
    pass


class CapExceededError(RuntimeError):
    def __init__(self, ell: int, cap: int):
        super().__init__(f"ell={ell} needs more than {cap} colors")
        self.ell = ell
        self.cap = cap


class CertificateError(ColoringError):
    """Two rows carry the same color set."""

    def __init__(self, rows: tuple[int, int], path: tuple | None):
        super().__init__(f"rows {rows[0]} and {rows[1]} share a color set; path {path}")
        self.rows = rows
        self.path = path


@dataclass(frozen=True, eq=False)
class TriangleColoring:
    """Colors of all pairs ``i < j`` stored in an upper-triangular grid.

    ``grid[i-1, j-1]`` is the color of ``(i, j)``; entries on or below the
    diagonal are 0.  Colors are ``1..K``.
    """

    ell: int
    grid: np.ndarray
    K: int

    def __post_init__(self):
        if self.ell < 2:
            raise ColoringError("ell must be at least 2")
        if self.grid.shape != (self.ell, self.ell):
            raise ColoringError(f"grid must be {self.ell}x{self.ell}")
        upper = np.triu(np.ones_like(self.grid, dtype=bool), 1)
        vals = self.grid[upper]
        if vals.min() < 1:
            raise ColoringError("every pair must be colored")
        if np.any(self.grid[~upper] != 0):
            raise ColoringError("grid must be strictly upper triangular")
        used = np.unique(vals)
        if not np.array_equal(used, np.arange(1, len(used) + 1)) or len(used) != self.K:
            raise ColoringError(f"colors must be exactly 1..{self.K}, got {used.tolist()}")

    @property
    def side(self) -> int:
        return self.ell - 1

    def color(self, i: int, j: int) -> int:
        if not 1 <= i < j <= self.ell:
            raise IndexError(f"need 1 <= i < j <= {self.ell}, got ({i}, {j})")
        return int(self.grid[i - 1, j - 1])

    def row(self, t: int) -> np.ndarray:
        return self.grid[t - 1, t:]

    def column(self, t: int) -> np.ndarray:
        return self.grid[: t - 1, t - 1]

    @classmethod
    def from_mapping(cls, ell: int, colors: Mapping[tuple[int, int], int]) -> "TriangleColoring":
        grid = np.zeros((ell, ell), dtype=np.uint16)
        for (i, j), c in colors.items():
            grid[i - 1, j - 1] = c
        used = sorted({int(c) for c in colors.values()})
        return cls(ell, grid, len(used))

    def to_text(self) -> str:
        """One line per row ``i = 1..ell-1``: colors of ``(i, i+1) .. (i, ell)``."""
        return "\n".join(" ".join(map(str, self.row(i).tolist())) for i in range(1, self.ell)) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "TriangleColoring":
        rows = [line.split() for line in text.strip().splitlines() if line.strip()]
        ell = len(rows) + 1
        grid = np.zeros((ell, ell), dtype=np.uint16)
        for i, row in enumerate(rows):
            if len(row) != ell - 1 - i:
                raise ColoringError(f"row {i + 1} has {len(row)} entries, expected {ell - 1 - i}")
            grid[i, i + 1 :] = [int(x) for x in row]
        return cls(ell, grid, len(np.unique(grid[np.triu_indices(ell, 1)])))


def color_recursive(m: int) -> TriangleColoring:
    """The ``m``-coloring of the triangle over ``2^m`` points.

    The square of pairs crossing the midpoint gets the new color ``m``; the
    two halves are colored the same way with colors ``1..m-1``.
    """
    if m < 1:
        raise ValueError("m must be positive")
    ell = 2**m
    grid = np.zeros((ell, ell), dtype=np.uint16)
    for c in range(1, m + 1):
        block, half = 2**c, 2 ** (c - 1)
        for s in range(0, ell, block):
            grid[s : s + half, s + half : s + block] = c
    return TriangleColoring(ell, grid, m)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    violation: tuple | None = None  # ((i, t), (t, j)) sharing a color

    def __bool__(self) -> bool:
        return self.ok


def _presence(c: TriangleColoring) -> tuple[np.ndarray, np.ndarray]:
    """Boolean ``(K, ell)`` arrays: color ``k+1`` occurs in row / column ``t``."""
    rows = np.zeros((c.K, c.ell), dtype=bool)
    cols = np.zeros((c.K, c.ell), dtype=bool)
    for k in range(c.K):
        hit = c.grid == k + 1
        rows[k] = hit.any(axis=1)
        cols[k] = hit.any(axis=0)
    return rows, cols


def verify_coloring(c: TriangleColoring) -> Verdict:
    rows, cols = _presence(c)
    clash = rows & cols
    if not clash.any():
        return Verdict(True)
    k, t = (int(x) for x in np.argwhere(clash)[0])
    color = k + 1
    i = int(np.argmax(c.grid[:t, t] == color)) + 1
    j = int(np.argmax(c.grid[t, :] == color)) + 1
    return Verdict(False, ((i, t + 1), (t + 1, j)))


def min_colors_exhaustive(ell: int, cap: int = 8) -> int:
    """Fewest colors admitting a valid coloring, by exhaustive search.

    The search runs column by column.  Once column ``j`` is filled, later
    cells only see its color set ``T_j``: cell ``(j, j')`` must avoid it.
    So a smaller ``T_j`` is never worse, and it is enough to branch over the
    minimal sets meeting the complement of every earlier column set.  No
    column before the last may use all colors, since its row still needs
    one.  Failed states are memoized as multisets of column sets.
    """
    if ell < 2:
        raise ValueError("ell must be at least 2")
    for K in range(1, cap + 1):
        if exhaustive_coloring(ell, K) is not None:
            return K
    raise CapExceededError(ell, cap)


def _minimal_hitting_sets(family: set[int], K: int) -> list[int]:
    full = (1 << K) - 1
    hits = [T for T in range(1, full + 1) if all(T & f for f in family)]
    hitset = set(hits)
    minimal = [T for T in hits if not any((T & ~(1 << b)) in hitset for b in range(K) if T >> b & 1)]
    return sorted(minimal, key=lambda T: (bin(T).count("1"), T))


def exhaustive_coloring(ell: int, K: int) -> TriangleColoring | None:
    """A valid coloring of ``ell`` points with at most ``K`` colors, or None."""
    full = (1 << K) - 1
    cols: list[int] = [0]  # column 1 has no cells
    failed: set[tuple[int, ...]] = set()

    def search() -> bool:
        j = len(cols)
        if j == ell:
            return True
        key = tuple(sorted(cols))
        if key in failed:
            return False
        for T in _minimal_hitting_sets({full & ~c for c in cols}, K):
            if T == full and j < ell - 1:
                continue
            cols.append(T)
            if search():
                return True
            cols.pop()
        failed.add(key)
        return False

    if not search():
        return None
    grid = np.zeros((ell, ell), dtype=np.uint16)
    for j in range(1, ell):
        for i in range(j):
            avail = cols[j] & ~cols[i]
            grid[i, j] = (avail & -avail).bit_length()
    used = np.unique(grid[np.triu_indices(ell, 1)])
    relabel = np.zeros(K + 1, dtype=np.uint16)
    relabel[used] = np.arange(1, len(used) + 1)
    return TriangleColoring(ell, relabel[grid], len(used))


@dataclass(frozen=True)
class Certificate:
    row_sets: tuple[frozenset, ...]
    bound: int
    colors_used: int

    @property
    def tight(self) -> bool:
        return self.bound == self.colors_used


def log2_bound(ell: int) -> int:
    """Least ``K`` with ``2^K - 1 >= ell - 1``."""
    return max(0, math.ceil(math.log2(ell))) if ell > 1 else 0


def certify_lower_bound(c: TriangleColoring) -> Certificate:
    """Row color sets of a valid coloring and the bound ``K >= ceil(log2 ell)``."""
    verdict = verify_coloring(c)
    if not verdict:
        raise ColoringError(f"not a valid coloring: {verdict.violation}")
    rows, _ = _presence(c)
    masks = np.zeros(c.ell, dtype=np.int64)
    for k in range(c.K):
        masks |= rows[k].astype(np.int64) << k
    masks = masks[: c.ell - 1]
    if np.any(masks == 0):
        t = int(np.argmax(masks == 0)) + 1
        raise ColoringError(f"row {t} has no colors")
    seen: dict[int, int] = {}
    for t, mask in enumerate(masks.tolist(), start=1):
        if mask in seen:
            i = seen[mask]
            color = c.color(i, t)
            jp = np.flatnonzero(c.row(t) == color)
            path = ((i, t), (t, t + 1 + int(jp[0]))) if len(jp) else None
            raise CertificateError((i, t), path)
        seen[mask] = t
    sets = tuple(frozenset(k + 1 for k in range(c.K) if mask >> k & 1) for mask in masks.tolist())
    return Certificate(sets, log2_bound(c.ell), c.K)


def iter_pairs(ell: int) -> Iterable[tuple[int, int]]:
    for i in range(1, ell):
        for j in range(i + 1, ell + 1):
            yield i, j
