"""Coherence profiles of the Hadamard-Haar systems.

The headline facts: the global coherence is always 1 (uniform subsampling
carries no guarantee), yet the local profile decays dyadically and the
multilevel grid is exactly diagonal, which is what variable- and
multilevel-density sampling exploit.

Run:  python3 demos/02_coherence.py
"""
import numpy as np

from hadhaar import (build_levels, local_coherence, multilevel_coherence,
                     relative_sparsity, structure_check, system_matrix)

for tag, r in (("had_dhw_1d", 3), ("had2_idhw", 3), ("had2_adhw", 3)):
    profile = local_coherence(tag, r=r)
    brute = local_coherence(tag, mode="brute", r=r)
    print(f"{tag}: N = {profile.values.size}")
    print("  local profile head:", profile.values[:8])
    print("  closed == brute bit-for-bit:",
          np.array_equal(profile.values, brute.values))
    print("  global coherence:", profile.global_coherence,
          " sum of squares:", profile.sum_sq)

# --- multilevel grid is diagonal --------------------------------------------
grid = multilevel_coherence("had_dhw_1d", r=3).values
print("\n1-D multilevel grid (levels x levels):")
print(grid)
print("off-diagonal exactly zero:",
      np.all(grid[~np.eye(4, dtype=bool)] == 0.0))

# --- the structure behind it -------------------------------------------------
report = structure_check("had_dhw_1d", r=3)
print("\nstructure check: max off-diagonal block entry =",
      report.max_off_diagonal,
      " max diagonal-block deviation =", report.max_diagonal_deviation)
u = system_matrix("had_dhw_1d", r=3)
print("block of levels 3x3 (scaled Hadamard pattern):")
print(u[4:8, 4:8])

# --- relative sparsity --------------------------------------------------------
part = build_levels("dyadic1d", 3)
k = np.minimum(part.sizes, 2)
print("\nper-level sparsities:", k)
print("relative sparsity bound :", relative_sparsity("had_dhw_1d", k, r=3))
print("relative sparsity search:",
      relative_sparsity("had_dhw_1d", k, mode="search", trials=32, seed=0, r=3))
