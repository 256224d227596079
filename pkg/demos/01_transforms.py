"""Fast transforms: Walsh-Hadamard and the three Haar wavelet bases.

Run:  python3 demos/01_transforms.py
"""
import numpy as np

from hadhaar import (coefficient_layout, dense_basis, fwht, haar_transform,
                     unvec, vec)

rng = np.random.default_rng(1)

# --- 1-D Walsh-Hadamard (Paley ordering, orthonormal, self-inverse) --------
x = rng.standard_normal(1024)
z = fwht(x)
print("fwht round trip max error:", np.max(np.abs(fwht(z) - x)))
print("fwht(ones(4)) =", fwht(np.ones(4)), "(energy lands on the first row)")

h = dense_basis("hadamard1d", 3)
print("dense 8x8 Hadamard column 1:", h[:, 0])
print("gram deviation:", np.max(np.abs(h.T @ h - np.eye(8))))

# --- 1-D Haar wavelets ------------------------------------------------------
coeffs = haar_transform("dhw", "analysis", x)
back = haar_transform("dhw", "synthesis", coeffs)
print("\ndhw round trip max error:", np.max(np.abs(back - x)))
print("dhw of a constant signal concentrates on the scaling coefficient:")
print("  ", haar_transform("dhw", "analysis", np.full(8, 1.0)))

# --- 2-D images: one isotropic and one anisotropic basis --------------------
img = rng.standard_normal((64, 64))
for tag in ("idhw", "adhw"):
    c = haar_transform(tag, "analysis", img)
    r = haar_transform(tag, "synthesis", c)
    print(f"\n{tag} round trip max error:", np.max(np.abs(r - img)))

# 2-D transforms act on both axes at once; vec/unvec give the flat view
z2 = fwht(img)
print("\n2-D fwht matches the vectorised operator:",
      np.allclose(vec(z2), dense_basis("hadamard2d", 6).T @ vec(img)))
print("unvec(vec(img)) identical:", np.array_equal(unvec(vec(img), 64), img))

# --- coefficient layout ------------------------------------------------------
layout = coefficient_layout("idhw", 2)
print("\nisotropic coefficient layout at side 4:")
print("  level  :", layout.level)
print("  subband:", layout.subband)
