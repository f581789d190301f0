"""Delta-Sobolev polynomials and their connection to the Charlier family.

With <p, q> = L[pq] + lambda L[Delta p Delta q], the monic orthogonal S_n
satisfy P_n = S_n + a_n S_{n-1}.  The script prints a_n, the Sobolev norms and
the residual of the connection identity for a few values of lambda.
"""
from fractions import Fraction

from charlier_sobolev import MomentTable, Params, PrecisionPolicy, build_Pn_gram, build_Sn
from charlier_sobolev.sobolev import connection_residual

policy = PrecisionPolicy(working_bits=256)
for lam in (0, Fraction(1, 10), 1, 10):
    params = Params(Fraction(1, 2), 1, lam)
    table = MomentTable.build(params, 9, policy)
    P, seqs = build_Pn_gram(8, table)
    S = build_Sn(8, table, seqs)
    worst = max(connection_residual(n, P, S) for n in range(2, 9))
    print(f"lambda = {lam}")
    print("  a_n:      ", " ".join(f"{float(a):.6f}" for a in S.a[1:]))
    print("  htilde_n: ", " ".join(f"{float(h):.4g}" for h in S.h_tilde))
    print(f"  connection residual {float(worst):.1e}")
