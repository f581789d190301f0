"""The generalized Charlier functional and its moment tables.

    L[p] = sum_{x >= 0} p(x) z^x / ((b+1)_x x!)

Moments on the factorial basis have the closed form

    nu_n = L[phi_n] = z^n / (b+1)_n * 0F1(; b+n+1; z),

which is a series of positive terms and is the route used everywhere.  The
direct weighted series over x is kept as an independent cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from numbers import Complex, Real

from .arith import DEFAULT_POLICY, PrecisionPolicy, sum_certified
from .basis import FactorialPolynomial

#: Class of the semiclassical functional: max(deg(phi - psi) - 1, deg(phi) - 2)
#: with phi(x) = x(x+b), psi(x) = z.
SEMICLASSICAL_CLASS = 1


def _as_fraction(value, name: str) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            raise ValueError(f"{name} must be a real number, got {value!r}") from None
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, Complex) and not isinstance(value, Real):
        raise ValueError(f"complex {name} is not supported")
    try:
        return Fraction(str(value))
    except ValueError:
        raise ValueError(f"{name} must be a real number, got {value!r}") from None


@dataclass(frozen=True)
class Params:
    """Exact rational parameters (b, z, lambda) with b > -1, z > 0, lambda >= 0."""

    b: Fraction
    z: Fraction
    lam: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "b", _as_fraction(self.b, "b"))
        object.__setattr__(self, "z", _as_fraction(self.z, "z"))
        object.__setattr__(self, "lam", _as_fraction(self.lam, "lambda"))
        if not self.z > 0:
            raise ValueError("z must be positive")
        if not self.b > -1:
            raise ValueError("b must be greater than -1")
        if self.lam < 0:
            raise ValueError("lambda must be non-negative")

    def reals(self, policy: PrecisionPolicy = DEFAULT_POLICY):
        """(b, z, lambda) as mpf values at the policy's precision."""
        return tuple(policy.real(v) for v in (self.b, self.z, self.lam))

    def as_dict(self) -> dict:
        return {"b": str(self.b), "z": str(self.z), "lambda": str(self.lam)}


def moment_nu(n: int, params: Params, policy: PrecisionPolicy = DEFAULT_POLICY):
    """nu_n = L[phi_n] from the 0F1 closed form with a certified tail."""
    ctx = policy.ctx
    b, z, _ = params.reals(policy)
    c = b + n + 1
    state = {"k": 0, "t": ctx.one}

    def term(k):
        while state["k"] < k:
            j = state["k"]
            state["t"] = state["t"] * z / ((c + j) * (j + 1))
            state["k"] = j + 1
        return state["t"]

    series = sum_certified(term, lambda k: z / ((c + k) * (k + 1)), policy)
    return z**n / ctx.rf(b + 1, n) * series


def apply_L(p: FactorialPolynomial, params: Params, policy: PrecisionPolicy = DEFAULT_POLICY):
    """L[p] summed directly over the lattice x = 0, 1, 2, ...

    For integer x >= d = deg p every phi_k(x) is non-negative, so
    M(x) = sum_k |p_k| phi_k(x) w(x) bounds |p(x) w(x)| and its ratio is at
    most z / ((x + 1 - d)(b + 1 + x)).  That majorant certifies the tail.
    """
    ctx = policy.ctx
    if p.degree < 0:
        return ctx.zero
    b, z, _ = params.reals(policy)
    coeffs = [policy.real(c) if not hasattr(c, "_mpf_") else c for c in p.coeffs]
    p = FactorialPolynomial(coeffs)
    absp = FactorialPolynomial([abs(c) for c in coeffs])
    d = p.degree
    state = {"x": 0, "w": ctx.one}

    def weight(x):
        while state["x"] < x:
            j = state["x"]
            state["w"] = state["w"] * z / ((b + 1 + j) * (j + 1))
            state["x"] = j + 1
        return state["w"]

    def term(x):
        return p(ctx.mpf(x)) * weight(x)

    def majorant(x):
        return absp(ctx.mpf(x)) * weight(x)

    def ratio(x):
        return z / ((x + 1 - d) * (b + 1 + x))

    return sum_certified(term, ratio, policy, k0=d, majorant=majorant)


def _nu2_entry(i: int, j: int, nu):
    return sum(comb(i, k) * comb(j, k) * factorial(k) * nu[i + j - k] for k in range(min(i, j) + 1))


def gram_nu(i: int, j: int, params: Params, policy: PrecisionPolicy = DEFAULT_POLICY):
    """nu_{i,j} = L[phi_i phi_j] via the linearization of phi_i phi_j."""
    nu = [moment_nu(n, params, policy) for n in range(i + j + 1)]
    return _nu2_entry(i, j, nu)


def gram_mu(i: int, j: int, params: Params, policy: PrecisionPolicy = DEFAULT_POLICY):
    """mu_{i,j} = <phi_i, phi_j> = nu_{i,j} + lambda i j nu_{i-1,j-1}."""
    nu = [moment_nu(n, params, policy) for n in range(i + j + 1)]
    out = _nu2_entry(i, j, nu)
    if i and j:
        out += policy.real(params.lam) * i * j * _nu2_entry(i - 1, j - 1, nu)
    return out


@dataclass(frozen=True)
class MomentTable:
    """Moments nu_0..nu_{2N} and Gram matrices nu_{i,j}, mu_{i,j} for i, j <= N."""

    params: Params
    policy: PrecisionPolicy
    n_max: int
    nu: tuple
    nu2: tuple = field(repr=False)
    mu2: tuple = field(repr=False)

    @classmethod
    def build(cls, params: Params, n_max: int, policy: PrecisionPolicy = DEFAULT_POLICY) -> "MomentTable":
        nu = tuple(moment_nu(n, params, policy) for n in range(2 * n_max + 1))
        ctx = policy.ctx
        size = n_max + 1
        nu2 = [[ctx.zero] * size for _ in range(size)]
        for i in range(size):
            for j in range(i + 1):
                nu2[i][j] = nu2[j][i] = ctx.fsum(
                    comb(i, k) * comb(j, k) * factorial(k) * nu[i + j - k] for k in range(j + 1)
                )
        lam = policy.real(params.lam)
        mu2 = [
            [nu2[i][j] + (lam * i * j * nu2[i - 1][j - 1] if i and j else 0) for j in range(size)]
            for i in range(size)
        ]
        return cls(params, policy, n_max, nu, tuple(map(tuple, nu2)), tuple(map(tuple, mu2)))

    @property
    def ctx(self):
        return self.policy.ctx

    def reals(self):
        return self.params.reals(self.policy)

    def L(self, p: FactorialPolynomial):
        """L[p] = sum_k p_k nu_k."""
        return self.ctx.fdot(p.coeffs, self.nu[: len(p.coeffs)])

    def bilinear(self, p: FactorialPolynomial, q: FactorialPolynomial):
        """L[p q] through the nu_{i,j} Gram matrix."""
        ctx = self.ctx
        return ctx.fsum(a * ctx.fdot(q.coeffs, self.nu2[i][: len(q.coeffs)]) for i, a in enumerate(p.coeffs))

    def sobolev(self, p: FactorialPolynomial, q: FactorialPolynomial):
        """<p, q> = L[p q] + lambda L[Delta p Delta q]."""
        out = self.bilinear(p, q)
        if self.params.lam:
            out += self.policy.real(self.params.lam) * self.bilinear(p.delta(), q.delta())
        return out

    def gram(self, which: str = "nu", size: int | None = None):
        """Leading ``size x size`` block of the nu or mu Gram matrix as lists."""
        mat = self.nu2 if which == "nu" else self.mu2
        size = self.n_max + 1 if size is None else size
        if size > self.n_max + 1:
            raise ValueError(f"table holds Gram entries up to index {self.n_max}")
        return [list(row[:size]) for row in mat[:size]]


# phi(x) = x(x+b) = phi_2 + (1+b) phi_1 on the factorial basis; psi(x) = z.
def pearson_phi(params: Params, policy: PrecisionPolicy = DEFAULT_POLICY) -> FactorialPolynomial:
    b = policy.real(params.b)
    return FactorialPolynomial([0, 1 + b, 1])


def check_pearson(p: FactorialPolynomial, params: Params, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Scaled residual of L[z p(x+1)] = L[x(x+b) p(x)], both sides by direct summation."""
    ctx = policy.ctx
    z = policy.real(params.z)
    lhs = apply_L(p.shift() * z, params, policy)
    rhs = apply_L(pearson_phi(params, policy) * p, params, policy)
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), ctx.one)


def check_pearson_delta_form(p: FactorialPolynomial, params: Params, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Scaled residual of L[psi Delta p] = L[(phi - psi) p]."""
    ctx = policy.ctx
    z = policy.real(params.z)
    lhs = apply_L(p.delta() * z, params, policy)
    rhs = apply_L((pearson_phi(params, policy) - z) * p, params, policy)
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), ctx.one)


def nu_leading(n: int, params: Params, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Small-z leading term of nu_n: z^n / (b+1)_n."""
    b, z, _ = params.reals(policy)
    return z**n / policy.ctx.rf(b + 1, n)


def nu2_leading(n: int, m: int, params: Params, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Small-z leading term of nu_{n,m}, m <= n: C(n,m) m! z^n / (b+1)_n."""
    return comb(n, m) * factorial(m) * nu_leading(n, params, policy)


def mu2_leading(i: int, j: int, params: Params, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Small-z leading term of mu_{i,j} for j <= i and lambda > 0.

    For j >= 1 this is lambda j i! z^{i-1} / ((i-j)! (b+1)_{i-1}); the
    lambda term vanishes for j = 0, where mu_{i,0} = nu_i ~ z^i/(b+1)_i.
    """
    if j == 0:
        return nu_leading(i, params, policy)
    b, z, lam = params.reals(policy)
    return lam * j * factorial(i) * z ** (i - 1) / (factorial(i - j) * policy.ctx.rf(b + 1, i - 1))
