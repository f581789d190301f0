"""Monic generalized Charlier polynomials P_n and their recurrence data.

Two routes to the recurrence coefficients are provided: the Gram route
(Cholesky factorization of the nu_{i,j} matrix, treated as ground truth) and
forward iteration of the Laguerre-Freud equations

    (gamma_{n+1} - z)(gamma_n - z) = z (beta_n - n)(beta_n - n + b)
    beta_n + beta_{n-1} = n - 1 - b + n z / gamma_n,

which loses digits as n grows because gamma_n -> z.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

from .arith import PrecisionPolicy, cholesky, determinant
from .basis import FactorialPolynomial, coefficient_residual, pochhammer
from .functional import MomentTable, Params


class DivergedFromOracle(ArithmeticError):
    """Laguerre-Freud iteration hit gamma_n ~ z; ``partial`` holds what was computed."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class CoeffSequences:
    """beta_n, gamma_n, h_n for one family, indexed from 0.

    ``gamma[0] == 0``.  ``h`` may be ``None`` for the Laguerre-Freud route
    when no h_0 seed was given.  ``xi[n]`` is defined for n >= 2 (entries 0 and
    1 are ``None``).
    """

    beta: tuple
    gamma: tuple
    h: tuple | None
    z: object
    route: str

    @property
    def xi(self) -> tuple:
        g = self.gamma
        return (None, None) + tuple(g[n] * g[n - 1] / self.z for n in range(2, len(g)))


@dataclass(frozen=True)
class OrthogonalPolySet:
    polys: tuple
    params: Params
    policy: PrecisionPolicy

    def __getitem__(self, n) -> FactorialPolynomial:
        if n < 0:
            return FactorialPolynomial()
        return self.polys[n]

    def __len__(self):
        return len(self.polys)


def monic_from_cholesky(L, policy: PrecisionPolicy) -> list[FactorialPolynomial]:
    """Monic orthogonal polynomials from the Cholesky factor of a Gram matrix.

    Row n of ``L^{-1}`` scaled by ``L[n][n]`` is the coefficient vector of
    the monic polynomial of degree n orthogonal to phi_0..phi_{n-1}.
    """
    ctx = policy.ctx
    out = []
    for n in range(len(L)):
        c = [ctx.zero] * (n + 1)
        c[n] = ctx.one
        for k in range(n - 1, -1, -1):
            c[k] = -ctx.fdot(c[k + 1:n + 1], [L[j][k] for j in range(k + 1, n + 1)]) / L[k][k]
        out.append(FactorialPolynomial(c))
    return out


def _gram_images(polys, G, ctx):
    # v[m][k] = L[phi_k P_m]
    return [[ctx.fdot(P.coeffs, row[: len(P.coeffs)]) for row in G] for P in polys]


def build_Pn_gram(N: int, table: MomentTable):
    """P_0..P_{N+1} and beta_0..beta_N, gamma_0..gamma_{N+1}, h_0..h_{N+1}.

    One index beyond N is built so that recurrences needing gamma_{N+1} can
    run.  Requires ``table.n_max >= N + 1``.
    """
    if table.n_max < N + 1:
        raise ValueError(f"moment table too small: need n_max >= {N + 1}, have {table.n_max}")
    policy = table.policy
    ctx = policy.ctx
    G = table.gram("nu", N + 2)
    L = cholesky(G, policy)
    polys = monic_from_cholesky(L, policy)
    h = [L[n][n] ** 2 for n in range(N + 2)]
    v = _gram_images(polys, G, ctx)

    def inner(p, m):
        return ctx.fdot(p.coeffs, v[m][: len(p.coeffs)])

    beta = [table.nu[1] / table.nu[0]]
    for n in range(1, N + 1):
        beta.append(inner(polys[n].times_x(), n) / h[n])
    gamma = [ctx.zero]
    for n in range(1, N + 2):
        gamma.append(inner(polys[n - 1].times_x(), n) / h[n - 1])
    z = policy.real(table.params.z)
    seqs = CoeffSequences(tuple(beta), tuple(gamma), tuple(h), z, "gram")
    return OrthogonalPolySet(tuple(polys), table.params, policy), seqs


def build_coeffs_laguerre_freud(
    N: int,
    params: Params,
    beta0,
    gamma1,
    policy: PrecisionPolicy,
    h0=None,
) -> CoeffSequences:
    """Forward Laguerre-Freud iteration seeded with beta_0 and gamma_1.

    Returns beta_0..beta_N and gamma_0..gamma_{N+1}.  Raises
    :class:`DivergedFromOracle` when |gamma_n - z| drops below the comparison
    tolerance times z.
    """
    ctx = policy.ctx
    b, z, _ = params.reals(policy)
    tol = policy.comparison_tolerance * z
    beta = [beta0]
    gamma = [ctx.zero, gamma1]

    def seqs():
        h = None
        if h0 is not None:
            h = [h0]
            for g in gamma[1:]:
                h.append(h[-1] * g)
            h = tuple(h)
        return CoeffSequences(tuple(beta), tuple(gamma), h, z, "laguerre_freud")

    for n in range(1, N + 1):
        g = gamma[n]
        beta.append(n - 1 - b + n * z / g - beta[n - 1])
        if abs(g - z) < tol:
            raise DivergedFromOracle(f"gamma_{n} - z underflowed the tolerance", seqs())
        bn = beta[n]
        gamma.append(z + z * (bn - n) * (bn - n + b) / (g - z))
    return seqs()


def structure_coeffs(n: int, seqs: CoeffSequences, params: Params) -> dict:
    """Nonzero A_k(n) of z P_n(x+1) = sum_k A_k(n) P_{n+k}(x): k = 0, -1, -2."""
    g = seqs.gamma
    z = seqs.z
    return {0: z, -1: n * z, -2: g[n] * g[n - 1] if n >= 1 else 0}


def _A(k: int, n: int, seqs: CoeffSequences):
    if n < 0 or k < -2 or k > 0:
        return 0
    return structure_coeffs(n, seqs, None)[k]


def structure_recurrence_terms(n: int, k: int, seqs: CoeffSequences) -> list:
    """Summands of the A_k recurrence, arranged to sum to zero.

    gamma_{n+k+1} A_{k+1}(n) - gamma_n A_{k+1}(n-1) + A_{k-1}(n) - A_{k-1}(n+1)
        - (beta_n - beta_{n+k} - 1) A_k(n)
    """
    g, be = seqs.gamma, seqs.beta
    return [
        g[n + k + 1] * _A(k + 1, n, seqs),
        -g[n] * _A(k + 1, n - 1, seqs),
        _A(k - 1, n, seqs),
        -_A(k - 1, n + 1, seqs),
        -(be[n] - be[n + k] - 1) * _A(k, n, seqs),
    ]


def scaled_sum(terms):
    """|sum(terms)| / max|term| (0 when every term vanishes exactly)."""
    scale = max(abs(t) for t in terms)
    total = sum(terms)
    return abs(total) / scale if scale else abs(total)


def lowered_structure_identities(n: int, seqs: CoeffSequences):
    """Scaled residuals of the k = -1 and k = -2 consequences of the A_k recurrence.

        gamma_n (gamma_{n-1} - gamma_{n+1}) = n z (beta_n - beta_{n-1} - 1)
        n z gamma_{n-1} - (n-1) z gamma_n = gamma_n gamma_{n-1} (beta_n - beta_{n-2} - 1)
    """
    g, be, z = seqs.gamma, seqs.beta, seqs.z
    r1 = scaled_sum([g[n] * g[n - 1], -g[n] * g[n + 1], -n * z * (be[n] - be[n - 1] - 1)])
    r2 = scaled_sum([n * z * g[n - 1], -(n - 1) * z * g[n], -g[n] * g[n - 1] * (be[n] - be[n - 2] - 1)])
    return r1, r2


def check_delta_identity(n: int, polyset: OrthogonalPolySet, seqs: CoeffSequences):
    """Normalized residual of Delta P_n = n P_{n-1} + xi_n P_{n-2}.

    Also checks z P_n(x+1) = z P_n + n z P_{n-1} + gamma_n gamma_{n-1} P_{n-2}
    and returns the larger of the two residuals.
    """
    P = polyset
    if n < 2:
        return coefficient_residual(P[n].delta(), P[n - 1] * n)
    z = seqs.z
    xi = seqs.gamma[n] * seqs.gamma[n - 1] / z
    r1 = coefficient_residual(P[n].delta(), P[n - 1] * n, P[n - 2] * xi)
    A = structure_coeffs(n, seqs, polyset.params)
    r2 = coefficient_residual(
        P[n].shift() * z, P[n] * A[0], P[n - 1] * A[-1], P[n - 2] * A[-2]
    )
    return max(r1, r2)


def three_term_residual(n: int, polyset: OrthogonalPolySet, seqs: CoeffSequences):
    """x P_n = P_{n+1} + beta_n P_n + gamma_n P_{n-1}, compared on the monomial basis."""
    P = polyset
    lhs = P[n].times_x()
    rhs = P[n + 1] + P[n] * seqs.beta[n] + P[n - 1] * seqs.gamma[n]
    lhs_m = FactorialPolynomial(lhs.to_monomial())
    rhs_m = FactorialPolynomial(rhs.to_monomial())
    return coefficient_residual(lhs_m, rhs_m)


def orthogonality_residual(polyset, norms, inner, n_max: int):
    """max_{i != j <= n_max} |inner(P_i, P_j)| / sqrt(h_i h_j)."""
    worst = 0
    for i in range(n_max + 1):
        for j in range(i):
            r = abs(inner(polyset[i], polyset[j])) / (norms[i] * norms[j]) ** 0.5
            worst = max(worst, r)
    return worst


def hankel_determinants(table: MomentTable, n_max: int, which: str = "nu") -> list:
    """H_0 = 1, H_n = det(Gram_{0<=i,j<=n-1}) for n = 1..n_max, each computed independently."""
    out = [table.ctx.one]
    for n in range(1, n_max + 1):
        out.append(determinant(table.gram(which, n), table.policy))
    return out


def norms_from_hankel(table: MomentTable, n_max: int, which: str = "nu") -> list:
    """h_n = H_{n+1} / H_n for n = 0..n_max."""
    H = hankel_determinants(table, n_max + 1, which)
    return [H[n + 1] / H[n] for n in range(n_max + 1)]


def h_leading(n: int, params: Params, policy: PrecisionPolicy):
    """Small-z leading term of h_n: n! z^n / (b+1)_n."""
    b, z, _ = params.reals(policy)
    return factorial(n) * z**n / pochhammer(b + 1, n)


def hankel_leading(n: int, params: Params, policy: PrecisionPolicy):
    """Small-z leading term of H_n: z^C(n,2) prod_{k=1}^{n-1} k!/(b+1)_k."""
    b, z, _ = params.reals(policy)
    out = z ** comb(n, 2)
    for k in range(1, n):
        out *= factorial(k) / pochhammer(b + 1, k)
    return out
