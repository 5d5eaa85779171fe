"""The tightly wound limit: I(rho) rho / log(1/rho) creeps towards 1."""

import math

from helix_mobius.asymptotics import g_bracket, g_series, small_rho_band
from helix_mobius.residue_series import residue_sum

for rho in (1e-2, 1e-3, 1e-4, 1e-5, 1e-6):
    tol = 1e-4 if rho <= 1e-6 else 1e-6
    i_res = residue_sum(rho, tol, relative=True).value
    ratio = i_res * rho / math.log(1 / rho)
    lo, hi = small_rho_band(rho)
    gap = g_series(rho) - math.log(1 / rho)
    glo, ghi = g_bracket(rho)
    print(f"rho = {rho:7.0e}  ratio = {ratio:.5f}  band [{lo:.4f}, {hi:.4f}]  "
          f"G - log(1/rho) = {gap:.5f} in [{glo:.4f}, {ghi:.4f}]")

# The ratio approaches 1 from above: the constant term of G - log(1/rho) is
# about 0.126, so the convergence is only logarithmic.
