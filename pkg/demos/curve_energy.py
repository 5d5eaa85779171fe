"""Energy densities and Moebius gradients of simple curves, and a sampled curve round trip."""

import math
import tempfile
from pathlib import Path

import numpy as np

from helix_mobius import integrate_density
from helix_mobius.curve_energy import (circle_curve, ellipse_curve, helix_curve, mobius_gradient_field,
                                       pointwise_energy, read_curve_csv, truncated_helix_bound,
                                       truncated_helix_energy, write_curve_csv)

print(f"unit circle density: {pointwise_energy(circle_curve(), 0.0).value:.12f} (2/pi = {2 / math.pi:.12f})")
print(f"unit circle gradient: {mobius_gradient_field(circle_curve(), 0.0)}")
print(f"ellipse 2:1 gradient at t = 0.7: {mobius_gradient_field(ellipse_curve(2.0, 1.0), 0.7)}")

rho = 1.0
I = integrate_density(rho, 1e-10).value
for T in (100.0, 1000.0, 10000.0):
    v = pointwise_energy(helix_curve(rho, T), 0.0, tol=1e-10, panel_width=16 * math.pi).value
    print(f"helix truncated at |t| <= {T:7.0f}: sqrt(2) E = {math.sqrt(2) * v:.10f}  (I = {I:.10f})")

for rho in (5.0, 10.0):
    print(f"truncated helix rho = {rho}: E = {truncated_helix_energy(rho, 1.0):.4e}"
          f" <= bound {truncated_helix_bound(rho, 1.0):.4e}")

with tempfile.TemporaryDirectory() as d:
    path = Path(d) / "trefoil.csv"
    t = np.linspace(0, 2 * np.pi, 257)[:-1]
    pts = np.c_[np.sin(t) + 2 * np.sin(2 * t), np.cos(t) - 2 * np.cos(2 * t), -np.sin(3 * t)]
    write_curve_csv(path, t, pts, closed=True)
    knot = read_curve_csv(path)
    vals = [pointwise_energy(knot, s, tol=1e-8).value for s in t[::32]]
    print("trefoil density at 8 points:", np.round(vals, 5))
