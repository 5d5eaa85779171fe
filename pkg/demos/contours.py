"""Side, arc and closed-contour integrals over the pole-free radii R_k = (2k + 1/2) pi."""

from helix_mobius.contour_checks import arc_integral, closed_contour_check, contour_radius, side_integral

rho = 0.5
print(f"{'k':>3} {'R_k':>8} {'|sides|':>11} {'|arc|':>11} {'contour - residues':>20}")
for k in range(1, 13):
    diff = closed_contour_check(rho, k).abs_diff if k <= 6 else float("nan")
    print(f"{k:3d} {contour_radius(k):8.3f} {side_integral(rho, k):11.3e} {arc_integral(rho, k):11.3e} {diff:20.2e}")

# The arc shrinks by about e^{-2 pi} per step; the sides only like 1/R^2.
