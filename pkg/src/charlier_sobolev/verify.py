"""Invariant suite shared by the ``verify`` subcommand and the tests.

Every check yields a :class:`Check`; failures of the Gram factorizations are
reported as failed checks rather than raised.
"""
from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .arith import NotPositiveDefinite, PrecisionPolicy, cholesky, determinant, relative_error, sum_certified
from .basis import FactorialPolynomial, falling_factorial, linearize
from .charlier import (
    DivergedFromOracle,
    build_coeffs_laguerre_freud,
    build_Pn_gram,
    check_delta_identity,
    norms_from_hankel,
    orthogonality_residual,
    lowered_structure_identities,
    three_term_residual,
)
from .functional import MomentTable, Params, apply_L, check_pearson
from .sobolev import (
    a2_closed_form,
    a_recurrence,
    build_Sn,
    connection_residual,
    htilde_closed_forms,
    htilde_recurrence,
    req_an_residual,
)

# Thresholds shared with the acceptance tests (calibrated for 512 bits).
TOL_ORTHO = Fraction(1, 10**60)
TOL_STRUCT = Fraction(1, 10**40)
TOL_LF = Fraction(1, 10**20)
TOL_HTILDE_REC = Fraction(1, 10**30)
TOL_A_REC = Fraction(1, 10**20)
LF_MAX_N = 15


@dataclass
class Check:
    name: str
    value: object
    target: object
    tolerance: object
    passed: bool
    note: str = ""


def random_polynomial(rng: random.Random, degree: int) -> FactorialPolynomial:
    """Degree-``degree`` polynomial with small rational factorial-basis coefficients."""
    coeffs = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(degree)]
    return FactorialPolynomial(coeffs + [Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 5))])


def _check(name, value, tolerance, target=0, note=""):
    return Check(name, value, target, tolerance, bool(value < tolerance), note)


def _max(values):
    values = list(values)
    return max(values) if values else 0


def _arith_checks(policy):
    ctx = policy.ctx
    state = {"k": 0, "t": ctx.one}

    def term(k):
        while state["k"] < k:
            state["k"] += 1
            state["t"] /= state["k"]
        return state["t"]

    e = sum_certified(term, lambda k: ctx.one / (k + 1), policy)
    tol = ctx.ldexp(1, -policy.working_bits)
    out = [_check("arith.sum_certified_e", relative_error(e, ctx.e), tol)]
    G = [[Fraction(1, i + j + 1) + (i == j) for j in range(6)] for i in range(6)]
    L = cholesky(G, policy)
    recon = _max(
        abs(ctx.fdot(L[i], L[j]) - policy.real(G[i][j])) for i in range(6) for j in range(6)
    )
    out.append(_check("arith.cholesky_reconstruction", recon, ctx.ldexp(1, -policy.working_bits + policy.guard_bits)))
    det_piv = ctx.fprod(L[i][i] for i in range(6)) ** 2
    out.append(_check(
        "arith.determinant_vs_pivots",
        relative_error(determinant([[policy.real(v) for v in row] for row in G], policy), det_piv),
        ctx.ldexp(1, -policy.working_bits + policy.guard_bits),
    ))
    return out


def _basis_checks(policy, rng):
    ctx = policy.ctx
    tol = ctx.ldexp(1, -policy.working_bits + policy.guard_bits)
    worst = 0
    xs = [policy.real(Fraction(rng.randint(-400, 400), rng.randint(1, 37))) for _ in range(5)]
    for n in range(11):
        for m in range(11):
            for x in xs:
                lhs = falling_factorial(n, x) * falling_factorial(m, x)
                rhs = ctx.fsum(w * falling_factorial(k, x) for k, w in linearize(n, m))
                worst = max(worst, abs(lhs - rhs) / max(abs(lhs), ctx.one))
    out = [_check("basis.linearization_pointwise", worst, tol)]
    worst = 0
    for _ in range(10):
        p = random_polynomial(rng, rng.randint(0, 8))
        diff = p.shift() - p - p.delta()
        worst = max(worst, diff.max_abs_coeff())
    out.append(_check("basis.shift_minus_identity_is_delta", worst, tol))
    return out


def _functional_checks(params, policy, table, rng):
    ctx = policy.ctx
    worst = 0
    for _ in range(10):
        p = random_polynomial(rng, rng.randint(0, 12))
        direct = apply_L(p, params, policy)
        moments = table.L(FactorialPolynomial(policy.real(c) for c in p.coeffs))
        worst = max(worst, abs(direct - moments) / max(abs(direct), ctx.one))
    out = [_check("functional.L_series_vs_moments", worst, ctx.ldexp(1, -policy.working_bits + policy.guard_bits))]
    pearson = _max(check_pearson(FactorialPolynomial.basis(k), params, policy) for k in range(16))
    pearson = max(pearson, _max(check_pearson(random_polynomial(rng, rng.randint(0, 10)), params, policy) for _ in range(5)))
    out.append(_check("functional.pearson", pearson, policy.real(TOL_ORTHO)))
    return out


def _charlier_checks(params, policy, table, n_max):
    out = []
    try:
        P, seqs = build_Pn_gram(n_max, table)
    except NotPositiveDefinite as exc:
        return [Check("charlier.gram_cholesky", None, None, None, False, f"NotPositiveDefinite: {exc}")], None, None
    tol = policy.real(TOL_ORTHO)
    out.append(Check("charlier.gamma0_zero", seqs.gamma[0], 0, 0, seqs.gamma[0] == 0))
    out.append(_check("charlier.orthogonality", orthogonality_residual(P, seqs.h, table.bilinear, n_max), tol))
    out.append(_check("charlier.three_term", _max(three_term_residual(n, P, seqs) for n in range(n_max)), tol))
    out.append(_check(
        "charlier.gamma_is_norm_ratio",
        _max(relative_error(seqs.gamma[n], seqs.h[n] / seqs.h[n - 1]) for n in range(1, n_max + 1)),
        tol,
    ))
    out.append(_check("charlier.delta_identity", _max(check_delta_identity(n, P, seqs) for n in range(2, n_max + 1)), tol))
    rem = [lowered_structure_identities(n, seqs) for n in range(2, n_max)]
    out.append(_check("charlier.structure_k_minus1", _max(r[0] for r in rem), policy.real(TOL_STRUCT)))
    out.append(_check("charlier.structure_k_minus2", _max(r[1] for r in rem), policy.real(TOL_STRUCT)))
    n_lf = min(n_max, LF_MAX_N)
    try:
        lf = build_coeffs_laguerre_freud(n_lf, params, seqs.beta[0], seqs.gamma[1], policy)
        disc = _max(
            max(relative_error(lf.beta[n], seqs.beta[n]), relative_error(lf.gamma[n], seqs.gamma[n]))
            for n in range(1, n_lf + 1)
        )
        out.append(_check("charlier.laguerre_freud_vs_gram", disc, policy.real(TOL_LF)))
    except DivergedFromOracle as exc:
        out.append(Check("charlier.laguerre_freud_vs_gram", None, 0, TOL_LF, False, str(exc)))
    n_h = min(n_max, 8)
    hk = norms_from_hankel(table, n_h, "nu")
    out.append(_check("charlier.norms_vs_hankel", _max(relative_error(seqs.h[n], hk[n]) for n in range(n_h + 1)), tol))
    return out, P, seqs


def _sobolev_checks(params, policy, table, n_max, P, seqs):
    tol = policy.real(TOL_ORTHO)
    try:
        S = build_Sn(n_max, table, seqs)
    except NotPositiveDefinite as exc:
        return [Check("sobolev.gram_cholesky", None, None, None, False, f"NotPositiveDefinite: {exc}")]
    out = [
        _check("sobolev.orthogonality", orthogonality_residual(S, S.h_tilde, table.sobolev, n_max), tol),
        _check("sobolev.connection", _max(connection_residual(n, P, S) for n in range(2, n_max + 1)), tol),
    ]
    ht = htilde_recurrence(n_max, seqs, params, policy)
    out.append(_check(
        "sobolev.htilde_recurrence_vs_direct",
        _max(relative_error(ht[n], S.h_tilde[n]) for n in range(n_max + 1)),
        policy.real(TOL_HTILDE_REC),
    ))
    if n_max >= 2:
        ht1, ht2 = htilde_closed_forms(seqs, params, policy)
        out.append(_check(
            "sobolev.htilde_closed_forms",
            max(relative_error(ht1, S.h_tilde[1]), relative_error(ht2, S.h_tilde[2])),
            tol,
        ))
        out.append(Check("sobolev.a1_zero", S.a[1], 0, 0, S.a[1] == 0))
        out.append(_check("sobolev.a2_closed_form", relative_error(S.a[2], a2_closed_form(seqs, params, policy)), tol))
    n_h = min(n_max, 8)
    hk = norms_from_hankel(table, n_h, "mu")
    out.append(_check("sobolev.norms_vs_hankel", _max(relative_error(S.h_tilde[n], hk[n]) for n in range(n_h + 1)), tol))
    if params.lam > 0:
        n_a = min(n_max, LF_MAX_N)
        ar = a_recurrence(n_a, seqs, params, S.a[2], policy)
        out.append(_check(
            "sobolev.a_recurrence_vs_closed_form",
            _max(relative_error(ar[n], S.a[n]) for n in range(2, n_a + 1)),
            policy.real(TOL_A_REC),
        ))
        out.append(_check(
            "sobolev.a_recurrence_consistent_with_norm_recurrence",
            _max(req_an_residual(n, seqs, S.a, params, policy) for n in range(2, min(n_max - 1, 10) + 1)),
            tol,
        ))
    else:
        worst = _max((P[n] - S[n]).max_abs_coeff() for n in range(n_max + 1))
        out.append(_check("sobolev.lambda_zero_matches_charlier", worst, tol))
    return out


def run_verify(params: Params, n_max: int, policy: PrecisionPolicy, threads: int = 1, seed: int = 20240611) -> list:
    """Run every invariant check; returns a list of :class:`Check` in a fixed order."""
    rng = random.Random(seed)
    rngs = [random.Random(rng.random()) for _ in range(2)]
    table = MomentTable.build(params, n_max + 1, policy)
    independent = [
        lambda: _arith_checks(policy),
        lambda: _basis_checks(policy, rngs[0]),
        lambda: _functional_checks(params, policy, table, rngs[1]),
    ]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        futures = [pool.submit(fn) for fn in independent]
        charlier_out, P, seqs = _charlier_checks(params, policy, table, n_max)
        results = [f.result() for f in futures]
    checks = [c for group in results for c in group] + charlier_out
    if P is not None:
        checks += _sobolev_checks(params, policy, table, n_max, P, seqs)
    return checks
