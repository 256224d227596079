"""Measurement-index sampling: uniform, variable and multilevel density.

Run:  python3 demos/03_sampling.py
"""
import numpy as np

from hadhaar import (build_levels, draw_sample, effective_sparsity, fwht,
                     generate, haar_transform, mds_allocate, measure,
                     measure_adjoint, uds_pmf, vds_pmf, SystemKind)

system = SystemKind("had_dhw_1d", 6)  # N = 64

# --- plans -------------------------------------------------------------------
uniform = uds_pmf(system)
variable = vds_pmf(system)
print("uds pmf: constant", uniform.pmf[0])
print("vds pmf first 8 entries:", variable.pmf[:8])
print("vds pmf sums to", float(variable.pmf.sum()))

# --- drawing is reproducible -------------------------------------------------
sample = draw_sample(variable, 16, seed=7)
again = draw_sample(variable, 16, seed=7)
print("\nvds draw (16 of 64):", sample.omega)
print("same seed, same draw:", np.array_equal(sample.omega, again.omega))
print("duplicates are kept; preconditioning weights 1/sqrt(pmf):")
print("  ", np.round(sample.weights, 3))
distinct = draw_sample(variable, 16, seed=7, replace=False)
print("without replacement (first-seen order):", distinct.omega)

# --- multilevel allocation ----------------------------------------------------
part = build_levels("dyadic1d", 6)
x = generate("blocks", 64)
per_level = effective_sparsity(haar_transform("dhw", "analysis", x),
                               0.995, part).per_level
plan = mds_allocate(per_level, 32, part)
print("\nblocks signal per-level sparsities:", per_level)
print("mds allocation of 32 measurements :", plan.m)
mds_sample = draw_sample(plan, 32, seed=3)
print("per-level draws are distinct:",
      np.unique(mds_sample.omega).size == mds_sample.omega.size)

# --- the measurement operator --------------------------------------------------
y = measure(system, sample, x)
print("\nmeasurements y = (Hx)[omega]:", np.round(y[:6], 4), "...")
print("adjoint consistency <Ax, y> == <x, A*y>:",
      np.isclose(measure(system, sample, x) @ y,
                 x @ measure_adjoint(system, sample, y)))
print("full Hadamard spectrum via fwht:", np.round(fwht(x)[:6], 4), "...")
