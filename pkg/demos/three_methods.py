"""Compute I(rho) by quadrature, the residue series and the closed-form w-series."""

import numpy as np

from helix_mobius import approx_sum, integrate_density, residue_sum

print(f"{'rho':>8} {'quadrature':>20} {'residue series':>20} {'w-series':>20} {'rel gap':>9}")
for rho in np.geomspace(0.01, 10, 7):
    q = integrate_density(rho, 1e-9).value
    r = residue_sum(rho, 1e-9, relative=True)
    w = approx_sum(rho, 1e-9, relative=True).value
    print(f"{rho:8.4f} {q:20.12f} {r.value:20.12f} {w:20.12f} {abs(r.value - q) / q:9.1e}"
          f"{'' if r.certified else '  (root bounds not certified at this pitch)'}")

# the quadrature respects pi/(3(rho^2+1)) <= I <= pi/(3 rho^2) for every pitch
