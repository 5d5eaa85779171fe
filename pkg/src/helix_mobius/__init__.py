"""
Moebius energy density of the circular helix ``(cos t, sin t, rho t)``.

``I(rho)`` is computed three ways (real-line quadrature, a residue series
over certified roots of ``E(z) = rho^2 z^2 + 4 sin^2(z/2)``, and a
closed-form approximate series) and checked against its asymptotics.
"""

__version__ = "0.1.0"

from .asymptotics import (AsymptoticReport, TransferReport, asymptotic_report, g_bracket,
                          g_series, h_bound, h_series, transfer_check)
from .contour_checks import arc_integral, closed_contour_check, side_integral
from .curve_energy import (AnalyticCurve, SampledCurve, helix_curve, mobius_gradient_field,
                           pointwise_energy, read_curve_csv, total_energy, truncated_helix_energy)
from .exceptions import HelixMobiusError
from .kernel import e_rho, m_rho_real
from .quadrature import EnergyEstimate, didrho, integrate_density, sinc_deficit_integral
from .residue_series import approx_sum, residue_sum
from .roots import StripRoot, curve_oracle, refine_root, refine_roots
from .special_functions import solve_alpha_beta, solve_ck

__all__ = [
    "AnalyticCurve", "AsymptoticReport", "EnergyEstimate", "HelixMobiusError", "SampledCurve",
    "StripRoot", "TransferReport", "__version__", "approx_sum", "arc_integral", "asymptotic_report",
    "closed_contour_check", "curve_oracle", "didrho", "e_rho", "g_bracket", "g_series", "h_bound",
    "h_series", "helix_curve", "integrate_density", "m_rho_real", "mobius_gradient_field",
    "pointwise_energy", "read_curve_csv", "refine_root", "refine_roots", "residue_sum",
    "side_integral", "sinc_deficit_integral", "solve_alpha_beta", "solve_ck", "total_energy",
    "transfer_check", "truncated_helix_energy",
]
