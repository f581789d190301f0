"""Falling-factorial basis phi_n(x) = x(x-1)...(x-n+1) and difference operators.

Polynomials are stored by their coefficients on {phi_k}.  Coefficients may be
ints, Fractions or mpf values; the operations here only add and multiply them,
so exact inputs stay exact.
"""
from __future__ import annotations

import functools
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Sequence


def pochhammer(c, n: int):
    """Rising factorial (c)_n = c (c+1) ... (c+n-1), with (c)_0 = 1."""
    out = 1
    for j in range(n):
        out = out * (c + j)
    return out


def falling_factorial(n: int, x):
    """phi_n(x) = x (x-1) ... (x-n+1), with phi_0 = 1."""
    out = 1
    for k in range(n):
        out = out * (x - k)
    return out


@functools.lru_cache(maxsize=None)
def _stirling1_row(n: int) -> tuple:
    # signed s(n, k): phi_n(x) = sum_k s(n, k) x^k
    if n == 0:
        return (1,)
    prev = _stirling1_row(n - 1)
    row = [0] * (n + 1)
    for k, v in enumerate(prev):
        row[k + 1] += v
        row[k] -= (n - 1) * v
    return tuple(row)


@functools.lru_cache(maxsize=None)
def _stirling2_row(n: int) -> tuple:
    # S(n, k): x^n = sum_k S(n, k) phi_k(x)
    if n == 0:
        return (1,)
    prev = _stirling2_row(n - 1)
    row = [0] * (n + 1)
    for k, v in enumerate(prev):
        row[k + 1] += v
        row[k] += k * v
    return tuple(row)


def stirling1(n: int, k: int) -> int:
    """Signed Stirling number of the first kind s(n, k)."""
    row = _stirling1_row(n)
    return row[k] if 0 <= k < len(row) else 0


def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind S(n, k)."""
    row = _stirling2_row(n)
    return row[k] if 0 <= k < len(row) else 0


def linearize(n: int, m: int) -> list[tuple[int, int]]:
    """Integer coefficients of phi_n phi_m on the factorial basis.

    Returns ``[(n + m - k, C(n,k) C(m,k) k!) for k = 0..min(n, m)]``.
    """
    return [(n + m - k, comb(n, k) * comb(m, k) * factorial(k)) for k in range(min(n, m) + 1)]


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class FactorialPolynomial:
    """A polynomial sum_k coeffs[k] phi_k(x).

    Trailing exact zeros are dropped; the zero polynomial has ``degree == -1``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = _trim(coeffs)

    @classmethod
    def basis(cls, n: int) -> "FactorialPolynomial":
        return cls([0] * n + [1])

    @classmethod
    def constant(cls, c) -> "FactorialPolynomial":
        return cls([c])

    @classmethod
    def from_monomial(cls, mono: Sequence) -> "FactorialPolynomial":
        """Convert coefficients on {x^k} via Stirling numbers of the second kind."""
        out = [0] * len(mono)
        for n, a in enumerate(mono):
            for k, s in enumerate(_stirling2_row(n)):
                if s:
                    out[k] = out[k] + s * a
        return cls(out)

    def to_monomial(self) -> list:
        """Coefficients on {x^k} via signed Stirling numbers of the first kind."""
        out = [0] * len(self.coeffs)
        for n, a in enumerate(self.coeffs):
            for k, s in enumerate(_stirling1_row(n)):
                if s:
                    out[k] = out[k] + s * a
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __repr__(self):
        return f"FactorialPolynomial({list(self.coeffs)!r})"

    def __eq__(self, other):
        if not isinstance(other, FactorialPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __call__(self, x):
        total = 0
        phi = 1
        for k, c in enumerate(self.coeffs):
            total = total + c * phi
            phi = phi * (x - k)
        return total

    def __add__(self, other):
        if not isinstance(other, FactorialPolynomial):
            other = FactorialPolynomial.constant(other)
        n = max(len(self), len(other))
        return FactorialPolynomial(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return FactorialPolynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, FactorialPolynomial):
            return FactorialPolynomial(c * other for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return FactorialPolynomial()
        out = [0] * (len(self) + len(other) - 1)
        for n, a in enumerate(self.coeffs):
            for m, b in enumerate(other.coeffs):
                ab = a * b
                for idx, w in linearize(n, m):
                    out[idx] = out[idx] + w * ab
        return FactorialPolynomial(out)

    def __rmul__(self, other):
        return self * other

    def delta(self) -> "FactorialPolynomial":
        """Forward difference p(x+1) - p(x), using Delta phi_k = k phi_{k-1}."""
        return FactorialPolynomial(k * c for k, c in enumerate(self.coeffs) if k)

    def translate(self, a: int) -> "FactorialPolynomial":
        """p(x + a) for integer a, by phi_n(x+a) = sum_k C(n,k) phi_k(a) phi_{n-k}(x)."""
        out = [0] * len(self.coeffs)
        for n, c in enumerate(self.coeffs):
            for k in range(n + 1):
                w = comb(n, k) * falling_factorial(k, a)
                if w:
                    out[n - k] = out[n - k] + w * c
        return FactorialPolynomial(out)

    def shift(self) -> "FactorialPolynomial":
        """p(x + 1)."""
        return self.translate(1)

    def nabla(self) -> "FactorialPolynomial":
        """Backward difference p(x) - p(x-1)."""
        return self - self.translate(-1)

    def times_x(self) -> "FactorialPolynomial":
        """x p(x), from x phi_k = phi_{k+1} + k phi_k."""
        out = [0] * (len(self.coeffs) + 1)
        for k, c in enumerate(self.coeffs):
            out[k + 1] = out[k + 1] + c
            out[k] = out[k] + k * c
        return FactorialPolynomial(out)

    def max_abs_coeff(self):
        return max((abs(c) for c in self.coeffs), default=0)


def coefficient_residual(p: FactorialPolynomial, *terms: FactorialPolynomial):
    """Max |coefficient| of ``p - sum(terms)`` divided by the largest coefficient involved."""
    diff = p
    for t in terms:
        diff = diff - t
    scale = max([p.max_abs_coeff()] + [t.max_abs_coeff() for t in terms])
    num = diff.max_abs_coeff()
    if not scale:
        return num
    if isinstance(num, (int, Fraction)) and isinstance(scale, (int, Fraction)):
        return Fraction(num) / scale
    return num / scale
