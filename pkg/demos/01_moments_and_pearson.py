"""Moments of the generalized Charlier functional.

The weight z^x / ((b+1)_x x!) on x = 0, 1, 2, ... has factorial moments with a
0F1 closed form.  Here they are compared with a direct lattice sum, and the
Pearson equation L[z p(x+1)] = L[x(x+b) p(x)] is checked on a few polynomials.
"""
from fractions import Fraction

from charlier_sobolev import FactorialPolynomial, MomentTable, Params, PrecisionPolicy, apply_L
from charlier_sobolev.functional import check_pearson

policy = PrecisionPolicy(working_bits=256)
params = Params(Fraction(1, 2), 1, 1)
table = MomentTable.build(params, 6, policy)

print("n   nu_n (closed form)           nu_n (lattice sum)")
for n in range(7):
    direct = apply_L(FactorialPolynomial.basis(n), params, policy)
    print(f"{n}   {policy.ctx.nstr(table.nu[n], 25):<28} {policy.ctx.nstr(direct, 25)}")

print("\nPearson residuals:")
for p in (FactorialPolynomial([1]), FactorialPolynomial([0, 0, 0, 1]), FactorialPolynomial.from_monomial([2, -1, 0, 3])):
    print(f"  {p!r:<60} {policy.ctx.nstr(check_pearson(p, params, policy), 3)}")
