"""Precision policy, certified series summation and dense linear algebra.

All numbers are :mod:`mpmath` ``mpf`` values bound to a private
:class:`mpmath.MPContext`, one per precision, so that no computation ever
touches the global ``mpmath.mp`` state.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import mpmath


class NonConvergent(ArithmeticError):
    """The ratio bound never dropped below 1/2 before ``max_index``."""


class NotPositiveDefinite(ArithmeticError):
    """A Cholesky pivot fell below the comparison tolerance."""


class Singular(ArithmeticError):
    """An LU pivot fell below the comparison tolerance."""


@functools.lru_cache(maxsize=None)
def _context(prec: int) -> mpmath.MPContext:
    ctx = mpmath.MPContext()
    ctx.prec = prec
    return ctx


@dataclass(frozen=True)
class PrecisionPolicy:
    """Working precision, guard bits and the tolerance used for comparisons.

    Arithmetic is carried out at ``working_bits + guard_bits``; results are
    trusted to ``working_bits``.
    """

    working_bits: int = 512
    guard_bits: int = 64
    comparison_tolerance: object = None

    def __post_init__(self):
        if self.working_bits < 64:
            raise ValueError("working_bits must be at least 64")
        if not 0 < self.guard_bits < self.working_bits:
            raise ValueError("guard_bits must satisfy 0 < guard_bits < working_bits")
        if self.comparison_tolerance is None:
            tol = self.ctx.ldexp(1, -(self.working_bits // 2))
            object.__setattr__(self, "comparison_tolerance", tol)
        elif not self.comparison_tolerance > 0:
            raise ValueError("comparison_tolerance must be positive")

    @classmethod
    def from_bits(cls, bits: int) -> "PrecisionPolicy":
        """Policy for ``bits`` of working precision with default guard bits.

        Below 256 working bits the guard is reduced to a quarter of the
        working precision so that ``guard_bits < working_bits`` still holds.
        """
        return cls(working_bits=bits, guard_bits=min(64, bits // 4))

    @property
    def ctx(self) -> mpmath.MPContext:
        return _context(self.working_bits + self.guard_bits)

    @property
    def eps(self):
        """Relative truncation target ``2**-(working_bits + guard_bits)``."""
        return self.ctx.ldexp(1, -(self.working_bits + self.guard_bits))

    def real(self, value):
        return to_real(self.ctx, value)


DEFAULT_POLICY = PrecisionPolicy()


def to_real(ctx: mpmath.MPContext, value):
    """Convert ints, Fractions, decimal/rational strings and mpf to ``ctx``.

    Strings go through :class:`fractions.Fraction`, so ``"1/2"`` and
    ``"0.1"`` are exact rationals before rounding to the working precision.
    """
    if isinstance(value, str):
        value = Fraction(value.strip())
    if isinstance(value, Fraction):
        return ctx.mpf(value.numerator) / value.denominator
    return ctx.mpf(value)


def sum_certified(
    term: Callable[[int], object],
    ratio_bound: Callable[[int], object],
    policy: PrecisionPolicy = DEFAULT_POLICY,
    k0: int = 0,
    max_index: int = 10**6,
    majorant: Callable[[int], object] | None = None,
):
    """Sum ``term(0) + term(1) + ...`` with a ratio-test tail bound.

    ``ratio_bound(k)`` must bound ``|term(k+1)/term(k)|`` for every
    ``k >= k0`` and be non-increasing there.  Summation stops at the first
    ``K >= k0`` with ``ratio_bound(K) <= 1/2`` and
    ``|term(K)| <= eps * |partial sum|``; the neglected tail is then at most
    ``2 |term(K+1)| <= |term(K)|``.

    With ``majorant``, a non-negative ``M(k) >= |term(k)|`` for ``k >= k0``,
    the ratio bound applies to ``M`` and the stopping test uses ``M(K)``.
    """
    ctx = policy.ctx
    eps = policy.eps
    half = ctx.mpf(0.5)
    total = ctx.zero
    for k in range(max_index + 1):
        t = term(k)
        total += t
        if k >= k0 and ratio_bound(k) <= half:
            bound = abs(t) if majorant is None else majorant(k)
            if bound <= eps * abs(total):
                return total
    raise NonConvergent(f"ratio bound did not certify the tail within {max_index} terms")


def cholesky(G: Sequence[Sequence], policy: PrecisionPolicy = DEFAULT_POLICY):
    """Lower-triangular ``L`` with ``L L^T = G`` (list of lists).

    Raises :class:`NotPositiveDefinite` if a squared pivot is not larger than
    ``comparison_tolerance`` times the largest diagonal entry of ``G``.
    """
    ctx = policy.ctx
    G = [[to_real(ctx, v) for v in row] for row in G]
    n = len(G)
    scale = max((abs(G[i][i]) for i in range(n)), default=ctx.one)
    floor = policy.comparison_tolerance * scale
    L = [[ctx.zero] * n for _ in range(n)]
    for j in range(n):
        Lj = L[j]
        d = G[j][j] - ctx.fdot(Lj[:j], Lj[:j])
        if d <= floor:
            raise NotPositiveDefinite(
                f"pivot {j} is {ctx.nstr(d, 5)} (threshold {ctx.nstr(floor, 5)}); "
                "parameters invalid or precision too low"
            )
        piv = ctx.sqrt(d)
        Lj[j] = piv
        for i in range(j + 1, n):
            Li = L[i]
            Li[j] = (G[i][j] - ctx.fdot(Li[:j], Lj[:j])) / piv
    return L


def _lu(G, policy):
    ctx = policy.ctx
    n = len(G)
    A = [[to_real(ctx, v) for v in row] for row in G]
    scale = max((abs(v) for row in A for v in row), default=ctx.one)
    floor = policy.comparison_tolerance * scale
    perm = list(range(n))
    sign = 1
    for j in range(n):
        p = max(range(j, n), key=lambda i: abs(A[i][j]))
        if abs(A[p][j]) <= floor:
            raise Singular(f"pivot {j} below tolerance")
        if p != j:
            A[j], A[p] = A[p], A[j]
            perm[j], perm[p] = perm[p], perm[j]
            sign = -sign
        for i in range(j + 1, n):
            f = A[i][j] / A[j][j]
            A[i][j] = f
            for k in range(j + 1, n):
                A[i][k] -= f * A[j][k]
    return A, perm, sign


def _is_symmetric(G) -> bool:
    n = len(G)
    return all(G[i][j] == G[j][i] for i in range(n) for j in range(i))


def determinant(G, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Determinant; Cholesky pivots for SPD input, partial-pivot LU otherwise."""
    ctx = policy.ctx
    if not len(G):
        return ctx.one
    if _is_symmetric(G):
        try:
            L = cholesky(G, policy)
        except NotPositiveDefinite:
            pass
        else:
            return ctx.fprod(L[i][i] for i in range(len(G))) ** 2
    A, _, sign = _lu(G, policy)
    return sign * ctx.fprod(A[i][i] for i in range(len(G)))


def forward_substitute(L, rhs, policy: PrecisionPolicy = DEFAULT_POLICY):
    ctx = policy.ctx
    y = []
    for i, row in enumerate(L):
        y.append((rhs[i] - ctx.fdot(row[:i], y)) / row[i])
    return y


def back_substitute(U, rhs, policy: PrecisionPolicy = DEFAULT_POLICY):
    ctx = policy.ctx
    n = len(U)
    x = [ctx.zero] * n
    for i in reversed(range(n)):
        x[i] = (rhs[i] - ctx.fdot(U[i][i + 1:], x[i + 1:])) / U[i][i]
    return x


def solve(G, rhs, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Solve ``G x = rhs`` by Cholesky when possible, else LU with pivoting."""
    ctx = policy.ctx
    rhs = [to_real(ctx, v) for v in rhs]
    if _is_symmetric(G):
        try:
            L = cholesky(G, policy)
        except NotPositiveDefinite:
            pass
        else:
            y = forward_substitute(L, rhs, policy)
            Lt = [[L[j][i] for j in range(len(L))] for i in range(len(L))]
            return back_substitute(Lt, y, policy)
    A, perm, _ = _lu(G, policy)
    n = len(A)
    b = [rhs[p] for p in perm]
    y = []
    for i in range(n):
        y.append(b[i] - ctx.fdot(A[i][:i], y))
    return back_substitute(A, y, policy)


def relative_error(value, reference):
    """``|value - reference| / |reference|`` (absolute when reference is 0)."""
    diff = abs(value - reference)
    ref = abs(reference)
    return diff / ref if ref else diff
