"""Fast and dense orthonormal transforms.

Five basis families over dyadic sizes N = 2^r:

* ``hadamard1d``  sequency (Paley) ordered Hadamard matrix H_r
* ``hadamard2d``  H_r (x) H_r acting on vectorised N x N images
* ``dhw``         1-D discrete Haar wavelet basis W_r
* ``adhw``        anisotropic 2-D Haar basis W_r (x) W_r
* ``idhw``        isotropic (multiscale) 2-D Haar basis

All matrices are orthonormal.  2-D arrays are vectorised column-major
(first axis fastest), matching :mod:`hadhaar.indexing`.  The isotropic
coefficient vector is laid out so that restricting to an ``iso2d`` level
reproduces the subband blocks in the order (01), (11), (10); subband (ab)
filters the first (row) axis with type b and the second (column) axis with
type a, where type 1 is the oscillating wavelet and type 0 the constant
window.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .indexing import build_levels

BASIS_TAGS = ("hadamard1d", "hadamard2d", "dhw", "adhw", "idhw")
DENSE_CAP_R_1D = 10
DENSE_CAP_R_2D = 6

_INV_SQRT2 = math.sqrt(0.5)

__all__ = [
    "BASIS_TAGS",
    "BasisKind",
    "CoefficientLayout",
    "coefficient_layout",
    "dense_basis",
    "dense_window_matrix",
    "fwht",
    "haar_transform",
    "unvec",
    "vec",
]


@dataclass(frozen=True)
class BasisKind:
    tag: str
    r: int

    def __post_init__(self):
        if self.tag not in BASIS_TAGS:
            raise ValueError(f"unknown basis tag {self.tag!r}")
        if self.r < 0:
            raise ValueError("r must be nonnegative")

    @property
    def is_2d(self):
        return self.tag in ("hadamard2d", "adhw", "idhw")

    @property
    def side(self):
        return 2 ** self.r

    @property
    def n_total(self):
        return 4 ** self.r if self.is_2d else 2 ** self.r


def _as_basis(kind, r=None):
    if isinstance(kind, BasisKind):
        return kind
    if r is None:
        raise ValueError("r is required when the basis is given as a tag")
    return BasisKind(kind, int(r))


def vec(x):
    """Column-major vectorisation of a 2-D array."""
    return np.asarray(x).reshape(-1, order="F")


def unvec(v, side=None):
    """Inverse of :func:`vec` for square arrays."""
    v = np.asarray(v)
    if side is None:
        side = math.isqrt(v.size)
    if side * side != v.size:
        raise ValueError("length is not a perfect square")
    return v.reshape((side, side), order="F")


def _pow2_half(k):
    """2**(k/2) with a single rounding (exact for even k)."""
    k = int(k)
    if k % 2 == 0:
        return math.ldexp(1.0, k // 2)
    return math.ldexp(math.sqrt(2.0), (k - 1) // 2)


def _pow2_half_array(k):
    k = np.asarray(k, dtype=np.int64)
    half, odd = np.divmod(k, 2)
    out = np.ldexp(1.0, half.astype(np.int32))
    return np.where(odd == 1, out * math.sqrt(2.0), out)


def _require_pow2(n, what="length"):
    if n < 1 or (n & (n - 1)) != 0:
        raise ValueError(f"{what} must be a power of two, got {n}")
    return n.bit_length() - 1


# ---------------------------------------------------------------------------
# fast transforms
# ---------------------------------------------------------------------------

def _fwht_axis0_raw(x):
    """Unscaled Walsh-Hadamard butterflies along the first axis."""
    n = x.shape[0]
    arr = np.asarray(x, dtype=np.float64).reshape(1, n, -1)
    while arr.shape[1] > 1:
        s = arr[:, 0::2, :] + arr[:, 1::2, :]
        d = arr[:, 0::2, :] - arr[:, 1::2, :]
        arr = np.stack([s, d], axis=1).reshape(-1, arr.shape[1] // 2, arr.shape[2])
    return arr.reshape(x.shape)


def fwht(x):
    """Orthonormal Walsh-Hadamard transform, Paley order.

    1-D input of length 2^r returns H_r^T x.  A square 2-D input returns
    H_r^T X H_r, the matrix form of the vectorised 2-D transform.  The
    matrix is symmetric and self-inverse, so analysis and synthesis agree.
    The 2^{-r/2} normalisation is applied once at the end (the butterflies
    stay unscaled), so integer inputs see a single rounding per entry.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        r = _require_pow2(x.shape[0])
        return _fwht_axis0_raw(x) * _pow2_half(-r)
    if x.ndim == 2:
        if x.shape[0] != x.shape[1]:
            raise ValueError("2-D input must be square")
        r = _require_pow2(x.shape[0], "side")
        return _fwht_axis0_raw(_fwht_axis0_raw(x).T).T * math.ldexp(1.0, -r)
    raise ValueError("input must be 1-D or 2-D")


def _dhw_scales(r):
    """Per-coefficient scales 2^(e/2): e = -r at index 1, l-1-r in level l."""
    expo = np.full(2 ** r, -r, dtype=np.int64)
    for l in range(1, r + 1):
        expo[2 ** (l - 1):2 ** l] = l - 1 - r
    return _pow2_half_array(expo)


def _dhw_analysis_axis0(x):
    a = np.asarray(x, dtype=np.float64)
    out = np.empty_like(a)
    size = a.shape[0]
    while size > 1:
        out[size // 2:size] = a[0::2] - a[1::2]
        a = a[0::2] + a[1::2]
        size //= 2
    out[0] = a[0]
    scale = _dhw_scales(out.shape[0].bit_length() - 1)
    return out * (scale if out.ndim == 1 else scale[:, None])


def _dhw_synthesis_axis0(c):
    c = np.asarray(c, dtype=np.float64)
    scale = _dhw_scales(c.shape[0].bit_length() - 1)
    c = c * (scale if c.ndim == 1 else scale[:, None])
    a = c[0:1].copy()
    size = 1
    while size < c.shape[0]:
        d = c[size:2 * size]
        nxt = np.empty((2 * size,) + c.shape[1:], dtype=np.float64)
        nxt[0::2] = a + d
        nxt[1::2] = a - d
        a = nxt
        size *= 2
    return a


def _idhw_scales(n):
    """Per-entry scales of the coefficient matrix: 2^(l-r-1), LL gets 2^-r."""
    r = n.bit_length() - 1
    expo = np.empty((n, n), dtype=np.int32)
    expo[0, 0] = -r
    size = n
    for l in range(r, 0, -1):
        h = size // 2
        expo[:h, h:size] = l - r - 1
        expo[h:size, :size] = l - r - 1
        size = h
    return np.ldexp(1.0, expo)


def _idhw_analysis(x):
    c = np.array(x, dtype=np.float64)
    size = c.shape[0]
    while size > 1:
        h = size // 2
        block = c[:size, :size]
        low0 = block[0::2, :] + block[1::2, :]
        high0 = block[0::2, :] - block[1::2, :]
        c[:h, :h] = low0[:, 0::2] + low0[:, 1::2]
        c[:h, h:size] = low0[:, 0::2] - low0[:, 1::2]
        c[h:size, :h] = high0[:, 0::2] + high0[:, 1::2]
        c[h:size, h:size] = high0[:, 0::2] - high0[:, 1::2]
        size = h
    return c * _idhw_scales(c.shape[0])


def _idhw_synthesis(c):
    x = np.asarray(c, dtype=np.float64) * _idhw_scales(np.asarray(c).shape[0])
    size = 1
    n = x.shape[0]
    while size < n:
        ll = x[:size, :size]
        d10 = x[:size, size:2 * size]
        d01 = x[size:2 * size, :size]
        d11 = x[size:2 * size, size:2 * size]
        low0 = np.empty((size, 2 * size))
        high0 = np.empty((size, 2 * size))
        low0[:, 0::2] = ll + d10
        low0[:, 1::2] = ll - d10
        high0[:, 0::2] = d01 + d11
        high0[:, 1::2] = d01 - d11
        block = np.empty((2 * size, 2 * size))
        block[0::2, :] = low0 + high0
        block[1::2, :] = low0 - high0
        x[:2 * size, :2 * size] = block
        size *= 2
    return x


def haar_transform(kind, direction, x, r=None):
    """Apply a Haar transform (``dhw``, ``adhw`` or ``idhw``).

    ``direction`` is ``"analysis"`` (signal to coefficients) or
    ``"synthesis"``.  1-D dhw expects a vector of length 2^r; the 2-D kinds
    expect a square 2^r x 2^r array whose vectorisation is column-major.
    """
    if isinstance(kind, BasisKind):
        basis = kind
    elif r is not None:
        basis = BasisKind(kind, int(r))
    else:
        n = np.asarray(x).shape[0]
        basis = BasisKind(kind, _require_pow2(int(n), "side"))
    if direction not in ("analysis", "synthesis"):
        raise ValueError("direction must be 'analysis' or 'synthesis'")
    x = np.asarray(x, dtype=np.float64)
    if basis.tag == "dhw":
        if x.ndim != 1 or x.shape[0] != basis.side:
            raise ValueError("dhw expects a vector of length 2^r")
        return _dhw_analysis_axis0(x) if direction == "analysis" else _dhw_synthesis_axis0(x)
    if basis.tag in ("adhw", "idhw"):
        if x.ndim != 2 or x.shape[0] != x.shape[1] or x.shape[0] != basis.side:
            raise ValueError(f"{basis.tag} expects a square array of side 2^r")
        if basis.tag == "adhw":
            if direction == "analysis":
                return _dhw_analysis_axis0(_dhw_analysis_axis0(x).T).T
            return _dhw_synthesis_axis0(_dhw_synthesis_axis0(x).T).T
        return _idhw_analysis(x) if direction == "analysis" else _idhw_synthesis(x)
    if basis.tag in ("hadamard1d", "hadamard2d"):
        return fwht(x)
    raise ValueError(f"unknown basis tag {basis.tag!r}")


# ---------------------------------------------------------------------------
# dense builders
# ---------------------------------------------------------------------------

def _hadamard_parts(r):
    """Sign pattern and per-column half-exponents of H_r."""
    signs = np.ones((1, 1), dtype=np.float64)
    for _ in range(r):
        signs = np.hstack([np.kron(signs, [[1.0], [1.0]]),
                           np.kron(signs, [[1.0], [-1.0]])])
    return signs, np.full(2 ** r, -r, dtype=np.int64)


def _haar_parts(r, window):
    """Sign pattern and per-column half-exponents of W^(1)_r or W^(0)_r."""
    signs = np.ones((1, 1), dtype=np.float64)
    hi = 1.0 if window else -1.0
    for k in range(1, r + 1):
        m = 2 ** (k - 1)
        signs = np.hstack([np.kron(signs, [[1.0], [1.0]]),
                           np.kron(np.eye(m), [[1.0], [hi]])])
    expo = np.empty(2 ** r, dtype=np.int64)
    expo[0] = -r
    for l in range(1, r + 1):
        expo[2 ** (l - 1):2 ** l] = l - 1 - r
    return signs, expo


def _materialize(parts):
    signs, expo = parts
    return signs * _pow2_half_array(expo)[None, :]


def _kron_parts(a, b):
    """Kronecker product of two (signs, exponents) factorisations."""
    signs = np.kron(a[0], b[0])
    expo = (a[1][:, None] + b[1][None, :]).reshape(-1)
    return signs, expo


def _idhw_parts(r):
    n = 2 ** r
    w1 = _haar_parts(r, window=False)
    w0 = _haar_parts(r, window=True)
    signs = np.zeros((n * n, n * n))
    expo = np.zeros(n * n, dtype=np.int64)
    levels = build_levels("iso2d", r)

    def place(cols, sa, ea, sb, eb):
        # columns of (W^(a) P^T) (x) (W^(b) P^T) land at flat positions cols
        signs[:, cols - 1] = np.kron(sa, sb)
        expo[cols - 1] = (ea[:, None] + eb[None, :]).reshape(-1)

    place(levels.levels[0], w0[0][:, :1], w0[1][:1], w0[0][:, :1], w0[1][:1])
    for l in range(1, r + 1):
        sel = slice(2 ** (l - 1), 2 ** l)
        m = 2 ** (l - 1)
        level = levels.levels[l]
        b01, b11, b10 = level[:m * m], level[m * m:2 * m * m], level[2 * m * m:]
        place(b01, w0[0][:, sel], w0[1][sel], w1[0][:, sel], w1[1][sel])
        place(b11, w1[0][:, sel], w1[1][sel], w1[0][:, sel], w1[1][sel])
        place(b10, w1[0][:, sel], w1[1][sel], w0[0][:, sel], w0[1][sel])
    return signs, expo


def _check_cap(basis):
    cap = DENSE_CAP_R_2D if basis.is_2d else DENSE_CAP_R_1D
    if basis.r > cap:
        raise ValueError(
            f"dense {basis.tag} matrices are capped at r <= {cap} "
            f"({'2-D' if basis.is_2d else '1-D'}); requested r = {basis.r}")


def dense_basis(kind, r=None):
    """Dense orthonormal basis matrix, built by direct recursion.

    Entries are sign patterns scaled by per-column powers 2^(k/2), so each
    entry carries a single rounding.  Sizes are capped (r <= 10 in 1-D,
    r <= 6 in 2-D) to keep memory bounded.
    """
    basis = _as_basis(kind, r)
    _check_cap(basis)
    if basis.tag == "hadamard1d":
        return _materialize(_hadamard_parts(basis.r))
    if basis.tag == "dhw":
        return _materialize(_haar_parts(basis.r, window=False))
    if basis.tag == "hadamard2d":
        h = _hadamard_parts(basis.r)
        return _materialize(_kron_parts(h, h))
    if basis.tag == "adhw":
        w = _haar_parts(basis.r, window=False)
        return _materialize(_kron_parts(w, w))
    return _materialize(_idhw_parts(basis.r))


def dense_window_matrix(r):
    """Dense W^(0)_r, the non-oscillating companion of the Haar recursion."""
    if r > DENSE_CAP_R_1D:
        raise ValueError(f"dense window matrices are capped at r <= {DENSE_CAP_R_1D}")
    return _materialize(_haar_parts(r, window=True))


# ---------------------------------------------------------------------------
# coefficient layout
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoefficientLayout:
    """Per-coefficient level and subband labels for a wavelet basis."""

    basis: BasisKind
    level: np.ndarray
    subband: tuple

    def __post_init__(self):
        if self.level.shape[0] != len(self.subband):
            raise ValueError("level/subband length mismatch")


def coefficient_layout(kind, r=None):
    """Level (list position) and subband tag of every coefficient index.

    Subband tags are ``"00"``, ``"01"``, ``"11"``, ``"10"`` for ``idhw`` and
    ``None`` for the separable kinds.
    """
    basis = _as_basis(kind, r)
    if basis.tag in ("hadamard1d", "hadamard2d"):
        raise ValueError("coefficient layout is defined for wavelet bases only")
    partition_kind = {"dhw": "dyadic1d", "adhw": "aniso2d", "idhw": "iso2d"}[basis.tag]
    part = build_levels(partition_kind, basis.r)
    level = part.level_of_index()
    if basis.tag != "idhw":
        return CoefficientLayout(basis, level, (None,) * part.n_total)
    tags = [""] * part.n_total
    tags[0] = "00"
    for l in range(1, basis.r + 1):
        lev = part.levels[l]
        m = 4 ** (l - 1)
        for idx in lev[:m]:
            tags[idx - 1] = "01"
        for idx in lev[m:2 * m]:
            tags[idx - 1] = "11"
        for idx in lev[2 * m:]:
            tags[idx - 1] = "10"
    return CoefficientLayout(basis, level, tuple(tags))
