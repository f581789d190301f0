"""Recurrence coefficients of the generalized Charlier polynomials by two routes.

The Gram route factors the moment matrix; the Laguerre-Freud route iterates a
nonlinear recurrence from beta_0 and gamma_1.  The second loses bits steadily,
so the agreement degrades with n.
"""
from fractions import Fraction

from charlier_sobolev import MomentTable, Params, PrecisionPolicy, build_coeffs_laguerre_freud, build_Pn_gram
from charlier_sobolev.arith import relative_error

policy = PrecisionPolicy(working_bits=256)
params = Params(Fraction(1, 2), 1)
N = 30
table = MomentTable.build(params, N + 1, policy)
P, gram = build_Pn_gram(N, table)
lf = build_coeffs_laguerre_freud(N, params, gram.beta[0], gram.gamma[1], policy)

print(" n   beta_n          gamma_n         LF relative error")
for n in range(0, N + 1, 3):
    err = relative_error(lf.gamma[n], gram.gamma[n]) if n else 0
    print(f"{n:2d}   {float(gram.beta[n]):<15.10f} {float(gram.gamma[n]):<15.10f} {float(err):.2e}")

print("\nP_3 on the falling-factorial basis:", [policy.ctx.nstr(c, 12) for c in P[3].coeffs])
