"""Reconstruction from subsampled Hadamard measurements.

Two reconstructions are provided: basis pursuit denoise (minimise the l1
norm of the wavelet coefficients inside a data ball) and minimal-energy
backprojection.  For uds/vds samples the data ball follows the weighted
convention (1/sqrt(M)) ||D (y - A u)|| <= eps with D = diag(weights); mds
samples use the plain residual ||y - A u|| <= eps.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .sampling import SampleSet, measure, measure_adjoint
from .transforms import fwht, haar_transform, unvec, vec

__all__ = ["RecoveryProblem", "RecoveryReport", "solve_bpdn", "me_reconstruct"]

_CHECK_EVERY = 50


@dataclass(frozen=True)
class RecoveryProblem:
    """One reconstruction instance with its solver tolerances."""

    system: object
    sample: SampleSet
    y: np.ndarray = field(repr=False)
    epsilon: float = 0.0
    tol_feas: float = 1e-6
    tol_gap: float = 1e-6
    max_iterations: int = 20000

    def __post_init__(self):
        y = np.asarray(self.y, dtype=np.float64)
        object.__setattr__(self, "y", y)
        if y.ndim != 1 or y.size != self.sample.n_measurements:
            raise ValueError("measurement vector length must match the sample")
        if y.size == 0:
            raise ValueError("cannot reconstruct from zero measurements")
        if not np.isfinite(y).all():
            raise ValueError("measurements must be finite")
        if not (math.isfinite(self.epsilon) and self.epsilon >= 0.0):
            raise ValueError("epsilon must be finite and nonnegative")
        if self.tol_feas <= 0 or self.tol_gap <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")

    @property
    def weighted(self):
        return self.sample.strategy in ("uds", "vds")


@dataclass(frozen=True)
class RecoveryReport:
    x_hat: np.ndarray = field(repr=False)
    iterations: int = 0
    feasibility_residual: float = 0.0
    objective: float = 0.0
    converged: bool = False


def _soft_threshold(v, t):
    return np.sign(v) * np.maximum(np.abs(v) - t, 0.0)


def solve_bpdn(problem):
    """Primal-dual solve of min ||s||_1 s.t. ||G s - b|| <= eps.

    Solved in synthesis form: s are the wavelet coefficients, G applies
    wavelet synthesis, the sensing transform, the subsampling gather and
    the weighting, and b is the weighted measurement vector.  The iteration
    alternates projection onto the dual of the data ball with
    soft-thresholding; both step sizes equal 0.99 / ||G||, and ||G||^2 is
    available exactly as the largest sum of squared weights landing on one
    measurement index.  Stops once the residual overshoot is within
    tol_feas * max(1, ||b||) and the iterate is stationary to tol_gap
    across consecutive checks (stationary iterates have a stationary
    objective, but not vice versa: on nearly degenerate instances the
    objective flatlines while the iterate still drifts along the optimal
    face); otherwise returns the best iterate seen with converged = False.
    """
    system, sample = problem.system, problem.sample
    m = sample.n_measurements
    n = system.n_total
    basis = problem.system.sparsity_basis
    w = sample.weights / math.sqrt(m) if problem.weighted else np.ones(m)
    b = w * problem.y
    eps = float(problem.epsilon)

    def synth(s):
        sig = unvec(s, system.side) if system.is_2d else s
        return haar_transform(basis, "synthesis", sig)

    def forward(s):
        return w * measure(system, sample, synth(s))

    def adjoint(q):
        coef = haar_transform(basis, "analysis", measure_adjoint(system, sample, w * q))
        return vec(coef) if system.is_2d else coef

    b_norm = float(np.linalg.norm(b))
    feas_slack = problem.tol_feas * max(1.0, b_norm)
    if b_norm <= eps:
        return RecoveryReport(synth(np.zeros(n)), 0, b_norm, 0.0, True)

    # G^T G is orthonormally similar to diag(c), so ||G|| is exact.
    c = np.bincount(sample.omega - 1, weights=w * w, minlength=n)
    step = 0.99 / math.sqrt(float(c.max()))

    s = np.zeros(n)
    s_bar = s
    q = np.zeros(m)
    best_s, best_over, best_obj = s, b_norm - eps, 0.0
    prev_s = None
    stable = 0
    converged = False
    it = 0
    while it < problem.max_iterations:
        it += 1
        v = q + step * (forward(s_bar) - b)
        if eps > 0.0:
            v_norm = float(np.linalg.norm(v))
            v = v * max(0.0, 1.0 - step * eps / v_norm) if v_norm > 0 else v * 0.0
        q = v
        s_new = _soft_threshold(s - step * adjoint(q), step)
        s_bar = 2.0 * s_new - s
        s = s_new
        if it % _CHECK_EVERY == 0 or it == problem.max_iterations:
            over = float(np.linalg.norm(forward(s) - b)) - eps
            obj = float(np.sum(np.abs(s)))
            if over <= feas_slack:
                if best_over > feas_slack or obj < best_obj:
                    best_s, best_over, best_obj = s, over, obj
            elif best_over > feas_slack and over < best_over:
                best_s, best_over, best_obj = s, over, obj
            moved = np.inf if prev_s is None else float(np.linalg.norm(s - prev_s))
            if moved <= problem.tol_gap * max(1.0, float(np.linalg.norm(s))):
                stable += 1
            else:
                stable = 0
            prev_s = s
            if over <= feas_slack and stable >= 2:
                converged = True
                break
    return RecoveryReport(synth(best_s), it, best_over + eps, best_obj, converged)


def me_reconstruct(system, sample, y):
    """Minimal-energy reconstruction: adjoint of the deduplicated sampler.

    Repeated indices are collapsed by averaging their measurements; the
    result is the right pseudo-inverse of the deduplicated row-orthonormal
    measurement operator applied to y.
    """
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (sample.n_measurements,):
        raise ValueError("measurement vector length must match the sample")
    if y.size == 0:
        raise ValueError("cannot reconstruct from zero measurements")
    pos = sample.omega - 1
    sums = np.bincount(pos, weights=y, minlength=system.n_total)
    counts = np.bincount(pos, minlength=system.n_total)
    avg = np.divide(sums, counts, out=np.zeros_like(sums), where=counts > 0)
    if system.is_2d:
        return fwht(unvec(avg, system.side))
    return fwht(avg)
