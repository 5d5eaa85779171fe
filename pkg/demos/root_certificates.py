"""Poles of the density: closed-form approximants, Newton refinement and their certificates."""

import numpy as np

from helix_mobius.roots import count_zeros_rectangle, curve_oracle_many, refine_roots

rho = 0.05
ks = np.arange(1, 10_001)
w, z, r, bound, cert, _ = refine_roots(rho, ks)
print(f"rho = {rho}: {cert.sum()} of {ks.size} roots certified")
print(f"largest |z_k - w_k| / bound = {np.max(np.abs(z - w) / bound):.3f}")
print(f"Newton vs curve oracle, k <= 100: {np.max(np.abs(curve_oracle_many(rho, ks[:100]) - z[:100])):.1e}")
for k in (1, 2, 10, 10_000):
    i = k - 1
    print(f"  k = {k:5d}  w = {w[i]:.10f}  z = {z[i]:.10f}  Rouche radius = {r[i]:.3e}")

# one root per strip [(2k-1) pi, 2k pi], none in the complementary strips
for rho in (0.05, 2.0):
    counts = [count_zeros_rectangle(rho, k) for k in range(1, 11)]
    empty = [count_zeros_rectangle(rho, k, complementary=True) for k in range(1, 11)]
    print(f"rho = {rho}: strip counts {counts}, complementary {empty}")
