"""Measurement-index sampling strategies and the sampling operator.

Three strategies over the Hadamard index set [N]:

* ``uds``  uniform i.i.d. draws with replacement
* ``vds``  variable-density i.i.d. draws from the squared local-coherence
           profile, with preconditioning weights d_j = 1 / sqrt(eta(omega_j))
* ``mds``  per-level draws without replacement, m_t indices inside level t

Sample sets are deterministic functions of (plan, M, seed).  Randomness
comes from counter-based Philox streams keyed by numpy seed sequences, so
independent streams can be split off a master seed reproducibly.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .coherence import SystemKind, local_coherence
from .indexing import LevelPartition
from .transforms import fwht, unvec, vec

RNG_ALGORITHM = "philox4x64/seedseq"
STRATEGIES = ("uds", "vds", "mds")

__all__ = [
    "RNG_ALGORITHM",
    "STRATEGIES",
    "SamplingPlan",
    "SampleSet",
    "draw_sample",
    "mds_allocate",
    "measure",
    "measure_adjoint",
    "rng_stream",
    "uds_pmf",
    "vds_pmf",
]


def rng_stream(seed, *key):
    """Philox generator for the sub-stream ``key`` of a master seed."""
    ss = np.random.SeedSequence(entropy=int(seed),
                                spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def _as_seed_sequence(seed):
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(entropy=int(seed))


@dataclass(frozen=True)
class SamplingPlan:
    """Immutable recipe for drawing measurement indices."""

    strategy: str
    n_total: int
    pmf: np.ndarray | None = field(default=None, repr=False)
    m: np.ndarray | None = field(default=None, repr=False)
    partition: LevelPartition | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.strategy in ("uds", "vds"):
            if self.pmf is None or self.pmf.shape != (self.n_total,):
                raise ValueError("uds/vds plans need a pmf over [n_total]")
            if np.any(self.pmf < 0) or abs(float(self.pmf.sum()) - 1.0) > 1e-12:
                raise ValueError("pmf must be nonnegative and sum to 1")
        else:
            if self.m is None or self.partition is None:
                raise ValueError("mds plans need per-level counts and a partition")
            sizes = self.partition.sizes
            if self.m.shape != sizes.shape or np.any(self.m < 0) or np.any(self.m > sizes):
                raise ValueError("per-level counts must lie in [0, |level|]")


@dataclass(frozen=True)
class SampleSet:
    """Drawn measurement indices with preconditioning weights."""

    omega: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    strategy: str
    seed: str
    rng_algorithm: str = RNG_ALGORITHM

    @property
    def n_measurements(self):
        return int(self.omega.size)


def uds_pmf(system, r=None):
    """Uniform sampling plan over the Hadamard indices."""
    system = system if isinstance(system, SystemKind) else SystemKind(system, int(r))
    n = system.n_total
    return SamplingPlan("uds", n, pmf=np.full(n, 1.0 / n))


def vds_pmf(system, r=None):
    """Variable-density plan: eta(l) proportional to the squared local coherence."""
    system = system if isinstance(system, SystemKind) else SystemKind(system, int(r))
    sq = local_coherence(system, mode="closed").values_squared
    return SamplingPlan("vds", system.n_total, pmf=sq / sq.sum())


def mds_allocate(k, m_total, partition):
    """Split a measurement budget across levels proportionally to k.

    Ideal quotas are m_total * k_t / K.  Levels whose quota exceeds their
    capacity |T_t| are frozen at capacity and the remaining budget is
    re-apportioned among the rest; the final integer split rounds quotas by
    largest remainder (exact rational remainders, ties to the lower level
    index).  Budget left over once every positive-k level is full spills
    into the k = 0 levels in ascending level order.
    """
    if not isinstance(partition, LevelPartition):
        raise ValueError("partition must be a LevelPartition")
    sizes = partition.sizes
    k = np.asarray(k, dtype=np.int64)
    if k.shape != sizes.shape:
        raise ValueError("k must hold one count per level")
    if np.any(k < 0) or np.any(k > sizes):
        raise ValueError("per-level sparsities must lie in [0, |level|]")
    if k.sum() == 0:
        raise ValueError("at least one level must have a positive count")
    m_total = int(m_total)
    if m_total < 0 or m_total > partition.n_total:
        raise ValueError("measurement budget must lie in [0, n_total]")

    m = np.zeros_like(sizes)
    remaining = m_total
    active = list(range(len(sizes)))
    while remaining > 0:
        pos = [t for t in active if k[t] > 0]
        if not pos:
            break
        k_act = int(k[pos].sum())
        over = [t for t in pos if remaining * int(k[t]) > int(sizes[t]) * k_act]
        if over:
            for t in over:
                m[t] = sizes[t]
                remaining -= int(sizes[t])
                active.remove(t)
            continue
        floors = {t: (remaining * int(k[t])) // k_act for t in pos}
        numer = {t: (remaining * int(k[t])) % k_act for t in pos}
        extra = remaining - sum(floors.values())
        for t in pos:
            m[t] = floors[t]
        for t in sorted(pos, key=lambda t: (-numer[t], t)):
            if extra == 0:
                break
            if m[t] < sizes[t]:
                m[t] += 1
                extra -= 1
        remaining = 0
    if remaining > 0:
        for t in sorted(active):
            take = min(int(sizes[t]) - int(m[t]), remaining)
            m[t] += take
            remaining -= take
            if remaining == 0:
                break
    if remaining > 0 or int(m.sum()) != m_total:
        raise ValueError("allocation infeasible for the requested budget")
    return SamplingPlan("mds", partition.n_total, m=m, partition=partition)


def _draw_distinct(rng, pool, count):
    """Partial Fisher-Yates draw of ``count`` distinct entries of ``pool``."""
    pool = np.array(pool, dtype=np.int64)
    for i in range(count):
        j = int(rng.integers(i, pool.size))
        pool[i], pool[j] = pool[j], pool[i]
    return pool[:count]


def draw_sample(plan, m_total, seed, replace=True):
    """Draw a SampleSet of size ``m_total`` from the plan, reproducibly.

    uds/vds draw i.i.d. indices by inverse CDF, keeping duplicates and
    draw order; with ``replace=False`` they instead keep drawing until
    ``m_total`` distinct indices have appeared (first-seen order).  mds
    always draws distinct indices inside each level and ignores the
    flag.  Identical (plan, m_total, seed, replace) gives an identical
    SampleSet.
    """
    if not isinstance(plan, SamplingPlan):
        raise ValueError("plan must be a SamplingPlan")
    m_total = int(m_total)
    if m_total < 1:
        raise ValueError("at least one measurement is required")
    ss = _as_seed_sequence(seed)
    rng = np.random.Generator(np.random.Philox(ss))
    if plan.strategy in ("uds", "vds"):
        cdf = np.cumsum(plan.pmf)
        if replace:
            u = rng.random(m_total)
            omega = np.searchsorted(cdf, u, side="right").astype(np.int64) + 1
            np.clip(omega, 1, plan.n_total, out=omega)
        else:
            if m_total > int(np.count_nonzero(plan.pmf > 0)):
                raise ValueError("distinct draws exceed the reachable indices")
            seen = np.zeros(plan.n_total + 1, dtype=bool)
            chosen = []
            while len(chosen) < m_total:
                u = rng.random(m_total)
                batch = np.searchsorted(cdf, u, side="right").astype(np.int64) + 1
                np.clip(batch, 1, plan.n_total, out=batch)
                for idx in batch:
                    if not seen[idx]:
                        seen[idx] = True
                        chosen.append(int(idx))
                        if len(chosen) == m_total:
                            break
            omega = np.array(chosen, dtype=np.int64)
        weights = 1.0 / np.sqrt(plan.pmf[omega - 1])
    else:
        if m_total != int(plan.m.sum()):
            raise ValueError("mds draws must request exactly sum(m) measurements")
        parts = []
        for lev, m_t in zip(plan.partition.levels, plan.m):
            if m_t > 0:
                parts.append(_draw_distinct(rng, lev, int(m_t)))
        omega = np.concatenate(parts) if parts else np.array([], dtype=np.int64)
        weights = np.ones(m_total)
    entropy = ss.entropy
    key = ".".join(str(k) for k in ss.spawn_key)
    return SampleSet(omega, weights, plan.strategy,
                     seed=f"{entropy}[{key}]" if key else str(entropy))


def _flat_signal(system, x):
    x = np.asarray(x, dtype=np.float64)
    if system.is_2d:
        if x.ndim == 2:
            if x.shape != (system.side, system.side):
                raise ValueError("image side must be 2^r")
            return x
        if x.ndim == 1 and x.size == system.n_total:
            return unvec(x, system.side)
        raise ValueError("2-D systems expect a square image or its vectorisation")
    if x.ndim != 1 or x.size != system.n_total:
        raise ValueError("1-D systems expect a vector of length 2^r")
    return x


def measure(system, sample, x):
    """Subsampled Hadamard measurements y_j = (Phi^T x)_{omega_j}."""
    sig = _flat_signal(system, x)
    z = fwht(sig)
    z = vec(z) if system.is_2d else z
    return z[sample.omega - 1]


def measure_adjoint(system, sample, y):
    """Adjoint of :func:`measure`: scatter-add into [N], then apply Phi."""
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (sample.n_measurements,):
        raise ValueError("measurement vector length must match the sample")
    z = np.bincount(sample.omega - 1, weights=y, minlength=system.n_total)
    if system.is_2d:
        return fwht(unvec(z, system.side))
    return fwht(z)
