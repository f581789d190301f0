"""Large-n behaviour at b = 1/2, z = 1, lambda = 1.

Residuals of the truncated expansions of gamma_n and a_n/z are fitted on a
log-log scale; the slope should sit near -4.  The last block shows the plateau
of n^3 ((S_n - P_n)/phi_n - z/n^2) at x = -1 next to the two candidate values
of sigma_3 - omega_3.
"""
from fractions import Fraction

from charlier_sobolev import Params, PrecisionPolicy, build_families
from charlier_sobolev.asymptotics import alpha_residuals, d3_estimate, fit_order, gamma_residuals, sigma_coeffs

policy = PrecisionPolicy()
fam = build_families(Params(Fraction(1, 2), 1, 1), 80, policy)

for name, res in (("gamma_n", gamma_residuals(fam, (30, 60))), ("a_n / z", alpha_residuals(fam, (30, 60)))):
    print(f"{name:8s} residual slope {fit_order(res).fitted_slope:+.3f}")

print("\n n   n^3 (diff - z/n^2)")
for n in (20, 40, 60, 80):
    print(f"{n:2d}   {float(d3_estimate(fam, n, -1)):.6f}")
for corrected in (False, True):
    d = sigma_coeffs(-1, fam.params, policy, corrected=corrected)["d"]
    label = "x + 1 form" if corrected else "x form"
    print(f"{label:11s} d_3 = {float(d[3]):.6f}")
