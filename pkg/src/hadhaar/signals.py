"""Test signals, the noise model, sparsity summaries and quality metrics.

1-D generators are sampled on the grid t_i = i / N for i = 1..N.  The
Blocks, Bumps, HeaviSine and Doppler constants follow the classic
Donoho-Johnstone test suite; the breakpoint and weight tables below are the
in-repo reference copy.  The phantom uses the classic ten-ellipse head
table with additive intensities.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .indexing import LevelPartition

SRE_CAP_DB = 300.0
SIGNAL_KINDS = ("gaussian_bump", "blocks", "bumps", "heavisine", "doppler",
                "shepp_logan")

__all__ = [
    "SIGNAL_KINDS",
    "SRE_CAP_DB",
    "EffectiveSparsity",
    "NoiseDraw",
    "NoiseSpec",
    "best_term_l1_error",
    "blocks",
    "bumps",
    "doppler",
    "effective_sparsity",
    "gaussian_bump",
    "generate",
    "hard_threshold",
    "heavisine",
    "load_signal_csv",
    "make_noise",
    "noise_sigma",
    "save_image_csv",
    "save_pgm",
    "save_signal_csv",
    "shepp_logan",
    "sre_db",
    "sre_from_ratios",
]


def _require_pow2(n, what="size"):
    n = int(n)
    if n < 1 or (n & (n - 1)) != 0:
        raise ValueError(f"{what} must be a power of two, got {n}")
    return n


# ---------------------------------------------------------------------------
# 1-D generators
# ---------------------------------------------------------------------------

def gaussian_bump(n, sigma, center):
    """Discretised Gaussian density with peak at the 1-based index ``center``."""
    n = _require_pow2(n)
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    i = np.arange(1, n + 1, dtype=np.float64)
    return np.exp(-((i - center) ** 2) / (2.0 * sigma ** 2)) / (sigma * math.sqrt(2.0 * math.pi))


# Donoho-Johnstone piecewise test signals: breakpoints and weights.
_DJ_POS = np.array([0.10, 0.13, 0.15, 0.23, 0.25, 0.40,
                    0.44, 0.65, 0.76, 0.78, 0.81])
_BLOCKS_HGT = np.array([4.0, -5.0, 3.0, -4.0, 5.0, -4.2,
                        2.1, 4.3, -3.1, 2.1, -4.2])
_BUMPS_HGT = np.array([4.0, 5.0, 3.0, 4.0, 5.0, 4.2,
                       2.1, 4.3, 3.1, 5.1, 4.2])
_BUMPS_WID = np.array([0.005, 0.005, 0.006, 0.01, 0.01, 0.03,
                       0.01, 0.01, 0.005, 0.008, 0.005])


def _grid(n):
    return np.arange(1, _require_pow2(n) + 1, dtype=np.float64) / n


def blocks(n):
    t = _grid(n)
    steps = (1.0 + np.sign(t[:, None] - _DJ_POS[None, :])) / 2.0
    return steps @ _BLOCKS_HGT


def bumps(n):
    t = _grid(n)
    kernel = (1.0 + np.abs(t[:, None] - _DJ_POS[None, :]) / _BUMPS_WID[None, :]) ** -4.0
    return kernel @ _BUMPS_HGT


def heavisine(n):
    t = _grid(n)
    return 4.0 * np.sin(4.0 * math.pi * t) - np.sign(t - 0.3) - np.sign(0.72 - t)


def doppler(n):
    t = _grid(n)
    return np.sqrt(t * (1.0 - t)) * np.sin(2.0 * math.pi * 1.05 / (t + 0.05))


# ---------------------------------------------------------------------------
# phantom
# ---------------------------------------------------------------------------

# Classic head phantom: intensity, semi-axes (a, b), centre (x0, y0) and
# rotation in degrees, intensities additive across overlapping ellipses.
_PHANTOM = np.array([
    [2.00, 0.6900, 0.9200, 0.00, 0.0000, 0.0],
    [-0.98, 0.6624, 0.8740, 0.00, -0.0184, 0.0],
    [-0.02, 0.1100, 0.3100, 0.22, 0.0000, -18.0],
    [-0.02, 0.1600, 0.4100, -0.22, 0.0000, 18.0],
    [0.01, 0.2100, 0.2500, 0.00, 0.3500, 0.0],
    [0.01, 0.0460, 0.0460, 0.00, 0.1000, 0.0],
    [0.01, 0.0460, 0.0460, 0.00, -0.1000, 0.0],
    [0.01, 0.0460, 0.0230, -0.08, -0.6050, 0.0],
    [0.01, 0.0230, 0.0230, 0.00, -0.6050, 0.0],
    [0.01, 0.0230, 0.0460, 0.06, -0.6050, 0.0],
])


def shepp_logan(n):
    """Classic head phantom rasterised on an n x n grid over [-1, 1]^2.

    Pixel (row i, column j) samples the plane at x increasing with j and y
    decreasing with i (the head points up); the background is exactly zero.
    """
    n = _require_pow2(n, "side")
    ax = (np.arange(n, dtype=np.float64) - (n - 1) / 2.0) / ((n - 1) / 2.0) if n > 1 \
        else np.zeros(1)
    x = ax[None, :]
    y = -ax[:, None]
    img = np.zeros((n, n))
    for amp, a, b, x0, y0, phi_deg in _PHANTOM:
        phi = math.radians(phi_deg)
        c, s = math.cos(phi), math.sin(phi)
        xr = (x - x0) * c + (y - y0) * s
        yr = -(x - x0) * s + (y - y0) * c
        img += amp * ((xr / a) ** 2 + (yr / b) ** 2 <= 1.0)
    return img


def generate(kind, size, **params):
    """Dispatch a named generator; 2-D kinds return square images."""
    if kind == "gaussian_bump":
        return gaussian_bump(size, params["sigma"], params["center"])
    if kind in ("blocks", "bumps", "heavisine", "doppler"):
        if params:
            raise ValueError(f"{kind} takes no parameters")
        return {"blocks": blocks, "bumps": bumps,
                "heavisine": heavisine, "doppler": doppler}[kind](size)
    if kind == "shepp_logan":
        if params:
            raise ValueError("shepp_logan takes no parameters")
        return shepp_logan(size)
    raise ValueError(f"unknown signal kind {kind!r}")


# ---------------------------------------------------------------------------
# noise
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NoiseSpec:
    """Target SNR in dB (inf for noiseless) and the stream seed."""

    snr_db: float
    seed: object = 0


@dataclass(frozen=True)
class NoiseDraw:
    vector: np.ndarray = field(repr=False)
    sigma: float
    norm: float
    weighted_norm: float | None = None


def noise_sigma(snr_db, x, n_meas):
    """Component deviation so that 20 log10(||x|| / (sigma sqrt(n_meas))) = snr."""
    if math.isinf(snr_db):
        return 0.0
    x = np.asarray(x, dtype=np.float64)
    return float(np.linalg.norm(x.reshape(-1)) / (math.sqrt(n_meas) * 10.0 ** (snr_db / 20.0)))


def make_noise(spec, x, n_meas, weights=None, rng=None):
    """Gaussian measurement noise for the target SNR.

    Reports the plain norm ||n|| and, when preconditioning weights are
    supplied, the weighted norm ||D n|| / sqrt(M) used as the oracle noise
    radius of weighted recoveries.
    """
    n_meas = int(n_meas)
    if n_meas < 1:
        raise ValueError("noise length must be positive")
    sigma = noise_sigma(spec.snr_db, x, n_meas)
    if rng is None:
        ss = spec.seed if isinstance(spec.seed, np.random.SeedSequence) \
            else np.random.SeedSequence(entropy=int(spec.seed))
        rng = np.random.Generator(np.random.Philox(ss))
    vector = sigma * rng.standard_normal(n_meas) if sigma > 0 else np.zeros(n_meas)
    weighted = None
    if weights is not None:
        weights = np.asarray(weights, dtype=np.float64)
        if weights.shape != (n_meas,):
            raise ValueError("weights length must match the noise length")
        weighted = float(np.linalg.norm(weights * vector) / math.sqrt(n_meas))
    return NoiseDraw(vector, sigma, float(np.linalg.norm(vector)), weighted)


# ---------------------------------------------------------------------------
# sparsity summaries
# ---------------------------------------------------------------------------

def hard_threshold(s, k):
    """Keep the k largest-magnitude entries (ties to the lower index)."""
    s = np.asarray(s, dtype=np.float64)
    if s.ndim != 1:
        raise ValueError("expected a vector")
    k = int(k)
    if k < 0 or k > s.size:
        raise ValueError("k must lie in [0, len(s)]")
    order = np.lexsort((np.arange(s.size), -np.abs(s)))
    out = np.zeros_like(s)
    keep = order[:k]
    out[keep] = s[keep]
    return out


@dataclass(frozen=True)
class EffectiveSparsity:
    rho: float
    total: int
    per_level: np.ndarray = field(repr=False)


def effective_sparsity(s, rho, partition):
    """Smallest K with ||H_K(s)|| >= rho ||s||, plus per-level counts.

    Evaluated through tail energies (the energy of the dropped entries) so
    that the rho = 1 boundary is exact for exactly sparse vectors.
    """
    if not isinstance(partition, LevelPartition):
        raise ValueError("partition must be a LevelPartition")
    s = np.asarray(s, dtype=np.float64)
    if s.shape != (partition.n_total,):
        raise ValueError("coefficient length must match the partition")
    if not 0.0 < rho <= 1.0:
        raise ValueError("rho must lie in (0, 1]")
    total_energy = float(np.sum(s ** 2))
    if total_energy == 0.0:
        raise ValueError("the zero vector has no effective sparsity")
    order = np.lexsort((np.arange(s.size), -np.abs(s)))
    sq = s[order] ** 2
    tails = np.concatenate([np.cumsum(sq[::-1])[::-1], [0.0]])
    allowed = (1.0 - rho * rho) * total_energy
    k_total = 1 + int(np.argmax(tails[1:] <= allowed))
    support = order[:k_total]
    level_of = partition.level_of_index()
    per_level = np.bincount(level_of[support], minlength=partition.n_levels)
    return EffectiveSparsity(float(rho), k_total, per_level.astype(np.int64))


def best_term_l1_error(u, k):
    """l1 distance to the best k-term approximation."""
    u = np.asarray(u, dtype=np.float64)
    return float(np.sum(np.abs(u - hard_threshold(u, k))))


# ---------------------------------------------------------------------------
# metrics
# ---------------------------------------------------------------------------

def sre_from_ratios(ratios):
    """Aggregate 20 log10(mean of ||x|| / error ratios); inf-safe."""
    ratios = np.asarray(ratios, dtype=np.float64)
    if ratios.size == 0:
        raise ValueError("at least one trial is required")
    mean = float(np.mean(ratios))
    return math.inf if math.isinf(mean) else 20.0 * math.log10(mean)


def sre_db(x, x_hats):
    """Signal reconstruction error in dB over a set of reconstructions.

    The expectation sits inside the logarithm: exact reconstructions push
    the aggregate to +inf (serialisers cap it at ``SRE_CAP_DB``).
    Returns (aggregate dB, per-trial dB array, per-trial error norms).
    """
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    norm = float(np.linalg.norm(x))
    if norm == 0.0:
        raise ValueError("reference signal must be nonzero")
    errors = np.array([float(np.linalg.norm(x - np.asarray(xh, dtype=np.float64).reshape(-1)))
                       for xh in x_hats])
    with np.errstate(divide="ignore"):
        ratios = np.where(errors > 0, norm / np.maximum(errors, 1e-300), np.inf)
        per_trial = 20.0 * np.log10(ratios)
    return sre_from_ratios(ratios), per_trial, errors


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------

def _fmt(v):
    return format(float(v), ".17g")


def save_signal_csv(path, x):
    """Write a 1-D signal as ``index,value`` rows (17 significant digits)."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("expected a vector")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("index,value\n")
        for i, v in enumerate(x, start=1):
            fh.write(f"{i},{_fmt(v)}\n")


def save_image_csv(path, img):
    """Write an image as ``row,col,value`` rows, row-major traversal.

    Row 1 is the top image row (the first array axis); columns run left to
    right along the second axis.
    """
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2:
        raise ValueError("expected a 2-D array")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("row,col,value\n")
        for i in range(img.shape[0]):
            for j in range(img.shape[1]):
                fh.write(f"{i + 1},{j + 1},{_fmt(img[i, j])}\n")


def load_signal_csv(path):
    """Read either CSV layout back into an array."""
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    if header == ["index", "value"]:
        out = np.empty(len(rows))
        for idx, val in rows:
            out[int(idx) - 1] = float(val)
        return out
    if header == ["row", "col", "value"]:
        n_r = max(int(r[0]) for r in rows)
        n_c = max(int(r[1]) for r in rows)
        out = np.empty((n_r, n_c))
        for i, j, val in rows:
            out[int(i) - 1, int(j) - 1] = float(val)
        return out
    raise ValueError(f"unrecognised CSV header {header!r}")


def save_pgm(path, img):
    """Write a binary PGM (maxval 255); input must already be uint8-ranged."""
    arr = np.asarray(img)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise ValueError("expected a 1-D or 2-D array")
    data = np.ascontiguousarray(arr, dtype=np.uint8)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{data.shape[1]} {data.shape[0]}\n255\n".encode("ascii"))
        fh.write(data.tobytes())
