"""Small-z regime: norms and connection coefficients against their leading terms."""
from fractions import Fraction

from charlier_sobolev import MomentTable, Params, PrecisionPolicy, build_Pn_gram, build_Sn
from charlier_sobolev.charlier import h_leading
from charlier_sobolev.sobolev import a_leading, htilde_leading, htilde_next_coefficient

policy = PrecisionPolicy()
for z in (Fraction(1, 10**2), Fraction(1, 10**4), Fraction(1, 10**8)):
    params = Params(Fraction(1, 2), z, 1)
    table = MomentTable.build(params, 6, policy)
    _, seqs = build_Pn_gram(5, table)
    S = build_Sn(5, table, seqs)
    ratios = [
        ("h_4", seqs.h[4] / h_leading(4, params, policy)),
        ("htilde_4", S.h_tilde[4] / htilde_leading(4, params, policy)),
        ("a_4", S.a[4] / a_leading(4, params, policy)),
    ]
    print(f"z = {float(z):.0e}: " + ", ".join(f"{k}/leading = {float(v):.10f}" for k, v in ratios))

print("\nNext-order coefficient of htilde_n, measured at z = 1e-12:")
params = Params(Fraction(1, 2), Fraction(1, 10**12), 1)
table = MomentTable.build(params, 6, policy)
S = build_Sn(5, table)
z = policy.real(params.z)
for n in range(1, 5):
    measured = (S.h_tilde[n] - htilde_leading(n, params, policy)) / z**n
    print(f"  n = {n}: measured {float(measured):.12f}, formula {float(htilde_next_coefficient(n, params, policy)):.12f}")
