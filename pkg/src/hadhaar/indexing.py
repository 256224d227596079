"""Index arithmetic and dyadic level partitions.

All public indices are 1-based.  A flat index ``l`` into a vectorised 2-D
array of shape ``(n1, n2)`` corresponds to the pair ``(l1, l2)`` through

    l = l1 + n1 * (l2 - 1),

i.e. column-major order: the first coordinate varies fastest.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PARTITION_KINDS = ("dyadic1d", "iso2d", "aniso2d")

__all__ = [
    "PARTITION_KINDS",
    "LevelPartition",
    "build_levels",
    "flatten_cartesian",
    "index_to_pair",
    "pair_to_index",
]


def _check_range(value, low, high, name):
    arr = np.asarray(value)
    if arr.size and (arr.min() < low or arr.max() > high):
        raise ValueError(f"{name} must lie in [{low}, {high}]")


def index_to_pair(l, n1, n2):
    """Split a flat 1-based index into its (l1, l2) pair.

    Accepts scalars or integer arrays; returns a pair of the same shape.
    """
    if n1 < 1 or n2 < 1:
        raise ValueError("grid sides must be positive")
    scalar = np.isscalar(l)
    arr = np.asarray(l, dtype=np.int64)
    _check_range(arr, 1, n1 * n2, "index")
    l1 = (arr - 1) % n1 + 1
    l2 = (arr - 1) // n1 + 1
    if scalar:
        return int(l1), int(l2)
    return l1, l2


def pair_to_index(l1, l2, n1, n2):
    """Inverse of :func:`index_to_pair`."""
    if n1 < 1 or n2 < 1:
        raise ValueError("grid sides must be positive")
    scalar = np.isscalar(l1) and np.isscalar(l2)
    a1 = np.asarray(l1, dtype=np.int64)
    a2 = np.asarray(l2, dtype=np.int64)
    _check_range(a1, 1, n1, "first coordinate")
    _check_range(a2, 1, n2, "second coordinate")
    l = a1 + n1 * (a2 - 1)
    if scalar:
        return int(l)
    return l


def flatten_cartesian(s1, s2, n1, n2):
    """Flat indices of the Cartesian product ``s1 x s2``.

    ``s1`` holds first coordinates (within [n1]) and ``s2`` second
    coordinates (within [n2]).  The result is ordered lexicographically in
    (second, first) coordinate, which is ascending flat-index order.
    """
    a1 = np.unique(np.asarray(list(s1), dtype=np.int64))
    a2 = np.unique(np.asarray(list(s2), dtype=np.int64))
    _check_range(a1, 1, n1, "first coordinate set")
    _check_range(a2, 1, n2, "second coordinate set")
    grid = a1[None, :] + n1 * (a2[:, None] - 1)
    return grid.reshape(-1)


@dataclass(frozen=True)
class LevelPartition:
    """Ordered partition of [n_total] into wavelet levels.

    ``levels[i]`` is the ordered 1-based index set of the i-th level.  For
    ``dyadic1d`` and ``iso2d`` list position i is level i (starting from the
    coarse level 0); for ``aniso2d`` position i is the level with pair index
    i + 1 under the (r+1, r+1) pairing, so the first 1-D level index varies
    fastest along the list.
    """

    kind: str
    r: int
    levels: tuple = field(repr=False)

    @property
    def n_levels(self):
        return len(self.levels)

    @property
    def sizes(self):
        return np.array([lev.size for lev in self.levels], dtype=np.int64)

    @property
    def n_total(self):
        return int(self.sizes.sum())

    def level_of_index(self):
        """Array mapping flat index (1-based, at offset i-1) to list position."""
        out = np.empty(self.n_total, dtype=np.int64)
        for pos, lev in enumerate(self.levels):
            out[lev - 1] = pos
        return out


def _dyadic_1d_levels(r):
    levels = [np.array([1], dtype=np.int64)]
    for l in range(1, r + 1):
        levels.append(np.arange(2 ** (l - 1) + 1, 2 ** l + 1, dtype=np.int64))
    return levels


def build_levels(kind, r):
    """Build the level partition of the given kind at dyadic order ``r``.

    dyadic1d: r+1 levels over [2^r], level 0 = {1}, level l = (2^{l-1}, 2^l].
    iso2d:    r+1 levels over [4^r]; level l >= 1 concatenates the three
              subband blocks (01), (11), (10) in that order, where block (ab)
              collects pairs with the first coordinate in T_l for b = 1
              (in T_{<l} for b = 0) and the second coordinate in T_l for
              a = 1 (in T_{<l} for a = 0).
    aniso2d:  (r+1)^2 levels over [4^r]; the level with pair index
              (t1+1, t2+1) is the flattening of T_{t1} x T_{t2}.
    """
    if kind not in PARTITION_KINDS:
        raise ValueError(f"unknown partition kind {kind!r}")
    if r < 0:
        raise ValueError("r must be nonnegative")
    one_d = _dyadic_1d_levels(r)
    if kind == "dyadic1d":
        return LevelPartition(kind, r, tuple(one_d))
    n = 2 ** r
    if kind == "iso2d":
        levels = [np.array([1], dtype=np.int64)]
        for l in range(1, r + 1):
            t_l = one_d[l]
            t_below = np.arange(1, 2 ** (l - 1) + 1, dtype=np.int64)
            block01 = flatten_cartesian(t_l, t_below, n, n)
            block11 = flatten_cartesian(t_l, t_l, n, n)
            block10 = flatten_cartesian(t_below, t_l, n, n)
            levels.append(np.concatenate([block01, block11, block10]))
        return LevelPartition(kind, r, tuple(levels))
    # aniso2d: pair index (t1+1) + (r+1)*t2 runs over 1..(r+1)^2
    levels = []
    for t in range(1, (r + 1) ** 2 + 1):
        p1, p2 = index_to_pair(t, r + 1, r + 1)
        levels.append(flatten_cartesian(one_d[p1 - 1], one_d[p2 - 1], n, n))
    return LevelPartition(kind, r, tuple(levels))
