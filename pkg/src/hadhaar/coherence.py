"""Local and multilevel coherence of Hadamard-Haar systems.

A system pairs the Paley-ordered Hadamard sensing basis with one of the
Haar sparsity bases:

* ``had_dhw_1d``  H_r with the 1-D Haar basis, dyadic levels
* ``had2_idhw``   H_r (x) H_r with the isotropic 2-D Haar basis, iso levels
* ``had2_adhw``   H_r (x) H_r with the anisotropic 2-D Haar basis

Every profile is available in two modes.  ``closed`` evaluates the analytic
formulas.  ``brute`` forms the dense product U = Phi^T Psi from
:func:`hadhaar.transforms.dense_basis` and takes maxima over its entries;
the product is evaluated exactly (the dense factors split into sign
patterns and per-column scales 2^(k/2), the sign patterns multiply in
integer arithmetic, and the scales recombine with a single rounding), so
vanishing blocks come out as exact zeros rather than roundoff dust.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .indexing import LevelPartition, build_levels, index_to_pair
from .transforms import (
    BasisKind,
    _hadamard_parts,
    _kron_parts,
    _materialize,
    _pow2_half,
    _pow2_half_array,
    dense_basis,
)

SYSTEM_TAGS = ("had_dhw_1d", "had2_idhw", "had2_adhw")
MODES = ("closed", "brute")

__all__ = [
    "SYSTEM_TAGS",
    "SystemKind",
    "CoherenceProfile",
    "MultilevelProfile",
    "StructureReport",
    "local_coherence",
    "multilevel_coherence",
    "relative_sparsity",
    "structure_check",
    "system_matrix",
]


@dataclass(frozen=True)
class SystemKind:
    tag: str
    r: int

    def __post_init__(self):
        if self.tag not in SYSTEM_TAGS:
            raise ValueError(f"unknown system tag {self.tag!r}")
        if self.r < 1:
            raise ValueError("r must be at least 1")

    @property
    def is_2d(self):
        return self.tag != "had_dhw_1d"

    @property
    def side(self):
        return 2 ** self.r

    @property
    def n_total(self):
        return 4 ** self.r if self.is_2d else 2 ** self.r

    @property
    def sensing_basis(self):
        return BasisKind("hadamard2d" if self.is_2d else "hadamard1d", self.r)

    @property
    def sparsity_basis(self):
        tag = {"had_dhw_1d": "dhw", "had2_idhw": "idhw", "had2_adhw": "adhw"}[self.tag]
        return BasisKind(tag, self.r)

    @property
    def partition_kind(self):
        return {"had_dhw_1d": "dyadic1d", "had2_idhw": "iso2d",
                "had2_adhw": "aniso2d"}[self.tag]

    def partition(self):
        return build_levels(self.partition_kind, self.r)


def _as_system(system, r=None):
    if isinstance(system, SystemKind):
        return system
    return SystemKind(system, int(r))


@dataclass(frozen=True)
class CoherenceProfile:
    """Row maxima of |U| together with their total energy."""

    system: SystemKind
    mode: str
    values: np.ndarray = field(repr=False)

    @property
    def values_squared(self):
        """Entrywise mu^2, with half-power entries squared exactly."""
        return _exact_square(self.values)

    @property
    def sum_sq(self):
        return float(np.sum(self.values_squared))

    @property
    def global_coherence(self):
        return float(self.values.max())


@dataclass(frozen=True)
class MultilevelProfile:
    """Grid of level-pair coherences mu_{t,l} in level-list order."""

    system: SystemKind
    mode: str
    values: np.ndarray = field(repr=False)

    def relative_sparsity_bound(self, k):
        """Upper bound on the relative sparsities K_t given per-level k."""
        part = self.system.partition()
        k = np.asarray(k, dtype=np.int64)
        if k.shape != (part.n_levels,) or np.any(k < 0) or np.any(k > part.sizes):
            raise ValueError("k must hold one count in [0, |level|] per level")
        return k.astype(np.float64)


# ---------------------------------------------------------------------------
# exact dense product
# ---------------------------------------------------------------------------

def _sign_scale_split(mat):
    """Split columns into {0, +-1} signs and 2^(a/2) scales, or return None."""
    scale = np.max(np.abs(mat), axis=0)
    if np.any(scale <= 0):
        return None
    a = np.round(2.0 * np.log2(scale)).astype(np.int64)
    if not np.array_equal(_pow2_half_array(a), scale):
        return None
    signs = mat / scale[None, :]
    good = (signs == 0) | (np.abs(signs) == 1.0)
    if not good.all():
        return None
    return signs, a


def _exact_gram(phi, psi):
    """Phi^T Psi with exact cancellation for sign-pattern bases."""
    left = _sign_scale_split(phi)
    right = _sign_scale_split(psi)
    if left is None or right is None:
        return phi.T @ psi
    ints = left[0].T @ right[0]  # integer-valued, exact in float64
    return ints * _pow2_half_array(left[1][:, None] + right[1][None, :])


def system_matrix(system, r=None):
    """Dense U = Phi^T Psi for the given system (exactly evaluated)."""
    system = _as_system(system, r)
    return _exact_gram(dense_basis(system.sensing_basis),
                       dense_basis(system.sparsity_basis))


# ---------------------------------------------------------------------------
# local coherence
# ---------------------------------------------------------------------------

def _floor_log2(values):
    return np.floor(np.log2(values.astype(np.float64))).astype(np.int64)


def _local_closed(system):
    n = system.side
    if system.tag == "had_dhw_1d":
        mu = np.ones(n)
        l = np.arange(2, n + 1)
        mu[1:] = _pow2_half_array(-_floor_log2(l - 1))
        return mu
    l = np.arange(1, n * n + 1)
    l1, l2 = index_to_pair(l, n, n)
    if system.tag == "had2_idhw":
        m = np.maximum(l1, l2)
        mu = np.ones(n * n)
        inner = m > 1
        mu[inner] = _pow2_half_array(-2 * _floor_log2(m[inner] - 1))
        return mu
    # anisotropic: product of the two 1-D exponents, evaluated jointly
    e1 = np.where(l1 > 1, _floor_log2(np.maximum(l1 - 1, 1)), 0)
    e2 = np.where(l2 > 1, _floor_log2(np.maximum(l2 - 1, 1)), 0)
    return _pow2_half_array(-(e1 + e2))


def local_coherence(system, mode="closed", r=None):
    """Per-row local coherence profile mu_l = max_j |U_{l,j}|."""
    system = _as_system(system, r)
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if mode == "closed":
        values = _local_closed(system)
    else:
        values = np.max(np.abs(system_matrix(system)), axis=1)
    return CoherenceProfile(system, mode, values)


# ---------------------------------------------------------------------------
# multilevel coherence
# ---------------------------------------------------------------------------

def _multilevel_closed(system):
    r = system.r
    if system.tag == "had_dhw_1d":
        diag = [_pow2_half(-2 * max(t - 1, 0)) for t in range(r + 1)]
    elif system.tag == "had2_idhw":
        diag = [_pow2_half(-4 * max(t - 1, 0)) for t in range(r + 1)]
    else:
        diag = []
        for t in range(1, (r + 1) ** 2 + 1):
            p1, p2 = index_to_pair(t, r + 1, r + 1)
            diag.append(_pow2_half(-2 * (max(p1 - 2, 0) + max(p2 - 2, 0))))
    return np.diag(np.array(diag))


def _half_exponent(value):
    """k with value == 2^(k/2) bit-exactly, else None."""
    if value <= 0.0:
        return None
    k = int(round(2.0 * math.log2(value)))
    return k if _pow2_half(k) == value else None


_SQRT2_MANTISSA = math.frexp(math.sqrt(2.0))[0]


def _exact_square(values):
    # entries 2^(k/2) with odd k square to fl(sqrt(2))^2 = 2 + ulp; detect
    # them by mantissa and substitute the exact power of two
    mant, expo = np.frexp(values)
    sq = values * values
    odd = mant == _SQRT2_MANTISSA
    sq[odd] = np.ldexp(1.0, 2 * expo[odd] - 1)
    return sq


def _max_product(x, y):
    # both maxima are half-power-of-two magnitudes, so combine exponents
    # instead of multiplying two rounded square roots
    kx, ky = _half_exponent(x), _half_exponent(y)
    if kx is not None and ky is not None:
        return _pow2_half(kx + ky)
    return x * y


def multilevel_coherence(system, mode="closed", r=None):
    """Grid mu_{t,l} = mu(P_t U) * mu(P_t U P_l^T) over level pairs."""
    system = _as_system(system, r)
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if mode == "closed":
        return MultilevelProfile(system, mode, _multilevel_closed(system))
    u = system_matrix(system)
    part = system.partition()
    n_lev = part.n_levels
    values = np.empty((n_lev, n_lev))
    row_max = np.empty(n_lev)
    for t, rows in enumerate(part.levels):
        row_max[t] = np.max(np.abs(u[rows - 1, :]))
    for t, rows in enumerate(part.levels):
        sub = np.abs(u[rows - 1, :])
        for l, cols in enumerate(part.levels):
            block_max = float(np.max(sub[:, cols - 1]))
            if block_max == 0.0:
                values[t, l] = 0.0
            else:
                values[t, l] = _max_product(float(row_max[t]), block_max)
    return MultilevelProfile(system, mode, values)


# ---------------------------------------------------------------------------
# relative sparsity
# ---------------------------------------------------------------------------

def relative_sparsity(system, k, mode="bound", trials=64, seed=0, r=None):
    """Relative sparsities K_t for per-level budgets k.

    ``bound`` returns the analytic upper bound (k_t itself for these
    systems).  ``search`` maximises ||P_t U z||^2 over random sign vectors
    on supports drawn within the per-level budgets, always including the
    all-in-level-t support; it returns a lower-bound certificate.
    """
    system = _as_system(system, r)
    part = system.partition()
    k = np.asarray(k, dtype=np.int64)
    if k.shape != (part.n_levels,) or np.any(k < 0) or np.any(k > part.sizes):
        raise ValueError("k must hold one count in [0, |level|] per level")
    if mode == "bound":
        return k.astype(np.float64)
    if mode != "search":
        raise ValueError("mode must be 'bound' or 'search'")
    u = system_matrix(system)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    out = np.zeros(part.n_levels)
    for t, rows in enumerate(part.levels):
        block = u[rows - 1, :]
        best = 0.0
        if k[t] > 0:
            cols = part.levels[t][:k[t]] - 1
            best = float(np.sum(block[:, cols].sum(axis=1) ** 2))
        for _ in range(trials):
            support = []
            for lev, k_l in zip(part.levels, k):
                if k_l > 0:
                    support.append(rng.choice(lev - 1, size=int(k_l), replace=False))
            support = np.concatenate(support) if support else np.array([], dtype=np.int64)
            signs = rng.integers(0, 2, size=support.size) * 2.0 - 1.0
            val = float(np.sum((block[:, support] @ signs) ** 2))
            best = max(best, val)
        out[t] = best
    return out


# ---------------------------------------------------------------------------
# block structure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StructureReport:
    """Residuals of the predicted block structure of U.

    ``off_diagonal[t, l]`` is max |entry| of the (t, l) block for t != l
    (zero predicted); ``diagonal_deviation[t]`` is the worst absolute
    deviation of |block| from the predicted magnitude pattern on the
    diagonal.
    """

    system: SystemKind
    off_diagonal: np.ndarray = field(repr=False)
    diagonal_deviation: np.ndarray = field(repr=False)

    @property
    def max_off_diagonal(self):
        return float(self.off_diagonal.max()) if self.off_diagonal.size else 0.0

    @property
    def max_diagonal_deviation(self):
        return float(self.diagonal_deviation.max())


def _hadamard_kron(ra, rb):
    # exact H_ra (x) H_rb: kron the sign patterns, add the exponents
    return _materialize(_kron_parts(_hadamard_parts(ra), _hadamard_parts(rb)))


def _expected_diag_block(system, t):
    if system.tag == "had_dhw_1d":
        return dense_basis("hadamard1d", max(t - 1, 0))
    if system.tag == "had2_idhw":
        if t == 0:
            return np.ones((1, 1))
        return np.kron(np.eye(3), _hadamard_kron(t - 1, t - 1))
    p1, p2 = index_to_pair(t + 1, system.r + 1, system.r + 1)
    return _hadamard_kron(max(p2 - 2, 0), max(p1 - 2, 0))


def structure_check(system, r=None):
    """Check the two-sided level-restricted structure of U.

    Diagonal blocks must match the magnitude pattern of a scaled Hadamard
    kernel (with the I_3 tensor layout in the isotropic case); off-diagonal
    blocks must vanish identically.
    """
    system = _as_system(system, r)
    u = system_matrix(system)
    part = system.partition()
    n_lev = part.n_levels
    off = np.zeros((n_lev, n_lev))
    diag = np.zeros(n_lev)
    for t, rows in enumerate(part.levels):
        sub = u[rows - 1, :]
        for l, cols in enumerate(part.levels):
            block = sub[:, cols - 1]
            if t == l:
                expected = _expected_diag_block(system, t)
                diag[t] = np.max(np.abs(np.abs(block) - np.abs(expected)))
            else:
                off[t, l] = np.max(np.abs(block))
    return StructureReport(system, off, diag)
