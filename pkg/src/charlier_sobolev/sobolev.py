"""Monic Delta-Sobolev orthogonal polynomials S_n for

    <p, q> = L[p q] + lambda L[Delta p Delta q],

their norms htilde_n, and the connection P_n = S_n + a_n S_{n-1} with

    a_n = (n-1) lambda / z * h_n / htilde_{n-1}.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

from .arith import PrecisionPolicy, cholesky
from .basis import FactorialPolynomial, coefficient_residual
from .charlier import CoeffSequences, OrthogonalPolySet, monic_from_cholesky, scaled_sum
from .functional import MomentTable, Params


class Degenerate(ArithmeticError):
    """htilde_{n-1} underflowed in the norm recurrence."""


class ZeroDenominator(ArithmeticError):
    """The bracket of the a_n recurrence underflowed."""


def sobolev_inner(p: FactorialPolynomial, q: FactorialPolynomial, table: MomentTable):
    """<p, q> with both L-applications through the moment table."""
    return table.sobolev(p, q)


@dataclass(frozen=True)
class SobolevSet:
    """S_0..S_N, htilde_0..htilde_N and, when Charlier norms were supplied, a_1..a_N.

    ``a[0]`` is ``None`` so that ``a[n]`` is a_n.
    """

    polys: tuple
    h_tilde: tuple
    a: tuple | None
    params: Params
    policy: PrecisionPolicy

    def __getitem__(self, n) -> FactorialPolynomial:
        if n < 0:
            return FactorialPolynomial()
        return self.polys[n]

    def __len__(self):
        return len(self.polys)


def connection_a(n: int, seqs: CoeffSequences, h_tilde, params: Params, policy: PrecisionPolicy):
    """a_n = (n-1) lambda h_n / (z htilde_{n-1}); a_1 = 0."""
    _, z, lam = params.reals(policy)
    if n == 1:
        return policy.ctx.zero
    return (n - 1) * lam * seqs.h[n] / (z * h_tilde[n - 1])


def build_Sn(N: int, table: MomentTable, seqs: CoeffSequences | None = None) -> SobolevSet:
    """Solve the mu_{i,j} Gram system by Cholesky for S_0..S_N.

    With Charlier ``seqs`` (h_0..h_N) the connection coefficients a_1..a_N
    are filled in as well.
    """
    policy = table.policy
    L = cholesky(table.gram("mu", N + 1), policy)
    polys = monic_from_cholesky(L, policy)
    h_tilde = tuple(L[n][n] ** 2 for n in range(N + 1))
    a = None
    if seqs is not None:
        a = (None,) + tuple(connection_a(n, seqs, h_tilde, table.params, policy) for n in range(1, N + 1))
    return SobolevSet(tuple(polys), h_tilde, a, table.params, policy)


def connection_residual(n: int, P: OrthogonalPolySet, S: SobolevSet, a_n=None):
    """Normalized coefficient residual of P_n - S_n - a_n S_{n-1}."""
    a_n = S.a[n] if a_n is None else a_n
    return coefficient_residual(P[n], S[n], S[n - 1] * a_n)


def htilde_recurrence(N: int, seqs: CoeffSequences, params: Params, policy: PrecisionPolicy) -> tuple:
    """htilde_0..htilde_N from htilde_0 = h_0 and

    htilde_n = lambda n^2 h_{n-1} + (1 + lambda gamma_n gamma_{n-1} / z^2) h_n
               - (n-1)^2 lambda^2 / z^2 * h_n^2 / htilde_{n-1}.
    """
    _, z, lam = params.reals(policy)
    h, g = seqs.h, seqs.gamma
    out = [h[0]]
    for n in range(1, N + 1):
        prev = out[-1]
        if abs(prev) <= policy.comparison_tolerance * abs(h[n - 1]):
            raise Degenerate(f"htilde_{n - 1} underflowed")
        out.append(
            lam * n**2 * h[n - 1]
            + (1 + lam * g[n] * g[n - 1] / z**2) * h[n]
            - (n - 1) ** 2 * lam**2 / z**2 * h[n] ** 2 / prev
        )
    return tuple(out)


def htilde_closed_forms(seqs: CoeffSequences, params: Params, policy: PrecisionPolicy):
    """(htilde_1, htilde_2) from the explicit low-order formulas."""
    _, z, lam = params.reals(policy)
    h, g = seqs.h, seqs.gamma
    ht1 = h[1] + lam * h[0]
    ht2 = h[2] + (4 * h[1] + g[1] * g[2] * h[2] / z**2 - lam / z**2 * h[2] ** 2 / (h[1] + lam * h[0])) * lam
    return ht1, ht2


def a2_closed_form(seqs: CoeffSequences, params: Params, policy: PrecisionPolicy):
    """a_2 = lambda h_2 / (z (h_1 + lambda h_0))."""
    _, z, lam = params.reals(policy)
    h = seqs.h
    return lam * h[2] / (z * (h[1] + lam * h[0]))


def _a_bracket(n, a_n, g, z, inv_lam):
    return n**2 / g[n] + inv_lam + g[n] * g[n - 1] / z**2 - (n - 1) * a_n / z


def a_recurrence(N: int, seqs: CoeffSequences, params: Params, a2_seed, policy: PrecisionPolicy) -> tuple:
    """a_1..a_N (with a leading ``None``) from a_1 = 0, a_2 = seed and

    n gamma_{n+1} / (z a_{n+1}) = n^2/gamma_n + 1/lambda + gamma_n gamma_{n-1}/z^2 - (n-1) a_n / z.

    Needs lambda > 0; the lambda -> infinity bracket is :func:`a_bracket_limit`.
    """
    if not params.lam > 0:
        raise ValueError("the a_n recurrence needs lambda > 0")
    ctx = policy.ctx
    _, z, lam = params.reals(policy)
    g = seqs.gamma
    a = [None, ctx.zero, a2_seed]
    for n in range(2, N):
        br = _a_bracket(n, a[n], g, z, 1 / lam)
        if abs(br) <= policy.comparison_tolerance * (n**2 / g[n]):
            raise ZeroDenominator(f"bracket at n={n} underflowed")
        a.append(n * g[n + 1] / (z * br))
    return tuple(a[: N + 1])


def a_bracket_limit(n: int, a_n, seqs: CoeffSequences, params: Params, policy: PrecisionPolicy):
    """The bracket of the a_n recurrence with 1/lambda -> 0."""
    _, z, _ = params.reals(policy)
    return _a_bracket(n, a_n, seqs.gamma, z, 0)


def req_an_residual(n: int, seqs: CoeffSequences, a: tuple, params: Params, policy: PrecisionPolicy):
    """Scaled residual of the a_n recurrence evaluated on closed-form a_n, a_{n+1}."""
    _, z, lam = params.reals(policy)
    g = seqs.gamma
    return scaled_sum([
        n * g[n + 1] / (z * a[n + 1]),
        -(n**2) / g[n],
        -1 / lam,
        -g[n] * g[n - 1] / z**2,
        (n - 1) * a[n] / z,
    ])


def htilde_leading(n: int, params: Params, policy: PrecisionPolicy):
    """Small-z leading term lambda n n! z^{n-1} / (b+1)_{n-1}, n >= 1."""
    b, z, lam = params.reals(policy)
    return lam * n * factorial(n) * z ** (n - 1) / policy.ctx.rf(b + 1, n - 1)


def htilde_next_coefficient(n: int, params: Params, policy: PrecisionPolicy):
    """The z^n coefficient n!(n+b-1+b lambda n)/((n+b-1)(b+1)_n) of htilde_n.

    Compared with measurement in the demos; not asserted.
    """
    b, _, lam = params.reals(policy)
    return factorial(n) * (n + b - 1 + b * lam * n) / ((n + b - 1) * policy.ctx.rf(b + 1, n))


def a_leading(n: int, params: Params, policy: PrecisionPolicy):
    """Small-z leading term n z / ((n+b)(n+b-1)), n >= 2."""
    b, z, _ = params.reals(policy)
    return n * z / ((n + b) * (n + b - 1))


def hankel_tilde_leading(n: int, params: Params, policy: PrecisionPolicy):
    """lambda^{n-1} z^C(n-1,2) prod_{k=1}^{n-2} (k+1)(k+1)!/(b+1)_k, n >= 1."""
    b, z, lam = params.reals(policy)
    ctx = policy.ctx
    out = lam ** (n - 1) * z ** comb(n - 1, 2) if n >= 1 else ctx.one
    for k in range(1, n - 1):
        out *= (k + 1) * factorial(k + 1) / ctx.rf(b + 1, k)
    return out
