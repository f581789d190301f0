"""Large-n expansion tables and the harness that measures them.

Expansions, all as n -> infinity:

    gamma_n = z - z b/n + z b^2/n^2 - b z (2z + b^2)/n^3 + O(n^-4)
    beta_n  = n + b z/n^2 - b(2b+1) z/n^3 + O(n^-4)
    a_n     ~ z sum_{k>=1} alpha_k n^-k
    P_n(x)/phi_n(x) ~ sum_k omega_k(x) n^-k
    S_n(x)/phi_n(x) ~ sum_k sigma_k(x) n^-k

The differences d_k = sigma_k - omega_k follow from
(x - n + 1)(P_n - S_n)/phi_n = a_n S_{n-1}/phi_{n-1}.  Writing the factor as
(x - n) instead gives brackets in a bare x; both variants are available
through ``corrected``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .arith import PrecisionPolicy, to_real
from .basis import FactorialPolynomial, falling_factorial
from .families import Families
from .functional import Params


class DegenerateFit(ArithmeticError):
    """Every residual is below tolerance: the truncated expansion is already exact."""


@dataclass(frozen=True)
class Expansion:
    """sum_k coefficients[k] n^-k, plus ``linear`` * n."""

    name: str
    coefficients: tuple
    scale: str
    linear: object = 0

    def evaluate(self, n):
        total = self.linear * n
        for k, c in enumerate(self.coefficients):
            total = total + c / n**k
        return total


def gamma_expansion(params: Params, policy: PrecisionPolicy) -> Expansion:
    b, z, _ = params.reals(policy)
    return Expansion("gamma", (z, -z * b, z * b**2, -b * z * (2 * z + b**2)), "gamma_n")


def beta_expansion(params: Params, policy: PrecisionPolicy) -> Expansion:
    b, z, _ = params.reals(policy)
    zero = policy.ctx.zero
    return Expansion("beta", (zero, zero, b * z, -b * (2 * b + 1) * z), "beta_n", linear=1)


def alpha_coeffs(params: Params, policy: PrecisionPolicy) -> tuple:
    """(alpha_1, alpha_2, alpha_3) = (1, 1 - 2b, 1 + 3b(b-1) - z/lambda)."""
    if not params.lam > 0:
        raise ValueError("alpha_3 needs lambda > 0")
    b, z, lam = params.reals(policy)
    return (policy.ctx.one, 1 - 2 * b, 1 + 3 * b * (b - 1) - z / lam)


def a_expansion(params: Params, policy: PrecisionPolicy) -> Expansion:
    a1, a2, a3 = alpha_coeffs(params, policy)
    return Expansion("a_over_z", (policy.ctx.zero, a1, a2, a3), "a_n / z")


def omega_coeffs(x, params: Params, policy: PrecisionPolicy) -> tuple:
    """(omega_0, .., omega_3) at x."""
    b, z, _ = params.reals(policy)
    x = to_real(policy.ctx, x)
    w2 = (x + 1 - b) * z + z**2 / 2
    w3 = ((x + 1) * (x + 1 - b) + b**2) * z + (2 * (x + 1 - b) + 1) * z**2 / 2 + z**3 / 6
    return (policy.ctx.one, z, w2, w3)


def omega_expansion(x, params: Params, policy: PrecisionPolicy) -> Expansion:
    return Expansion("P_over_phi", omega_coeffs(x, params, policy), "P_n(x) / phi_n(x)")


def sigma_coeffs(x, params: Params, policy: PrecisionPolicy, corrected: bool = False) -> dict:
    """Differences d_k = sigma_k - omega_k for k = 0..4 and sigma_0..sigma_3.

    ``corrected=False`` gives the bare-x formulas
    d_3 = [x + z + alpha_2] z and
    d_4 = [x^2 + (z + alpha_2) x + z(2 + alpha_2) + omega_2 + alpha_3] z.
    ``corrected=True`` replaces the bare x in those brackets by x + 1 (omega_2
    stays evaluated at x), which is what phi_n = (x - n + 1) phi_{n-1} gives.
    """
    b, z, _ = params.reals(policy)
    x = to_real(policy.ctx, x)
    _, a2, a3 = alpha_coeffs(params, policy)
    w = omega_coeffs(x, params, policy)
    u = x + 1 if corrected else x
    zero = policy.ctx.zero
    d = (zero, zero, z, (u + z + a2) * z, (u**2 + (z + a2) * u + z * (2 + a2) + w[2] + a3) * z)
    sigma = tuple(w[k] + d[k] for k in range(4))
    return {"d": d, "sigma": sigma, "omega": w, "corrected": corrected}


def sigma_differences_from_recursion(x, params: Params, policy: PrecisionPolicy, k_max: int = 4, shift: int = 0) -> tuple:
    """d_0..d_{k_max} generated by

        (x + shift)(omega_k - sigma_k) - (omega_{k+1} - sigma_{k+1})
            = z [alpha_k + sum_{j=1}^{k-1} alpha_{k-j} sum_{i=0}^{j-1} C(j-1, i) sigma_{i+1}]

    from d_0 = d_1 = 0.  ``shift=0`` yields the bare-x tables,
    ``shift=1`` the ones implied by phi_n = (x - n + 1) phi_{n-1}.  Needs the
    alpha and omega tables up to index k_max - 1.
    """
    _, z, _ = params.reals(policy)
    x = to_real(policy.ctx, x)
    alpha = (None,) + alpha_coeffs(params, policy)
    omega = omega_coeffs(x, params, policy)
    if k_max - 1 >= len(alpha) or k_max - 2 >= len(omega):
        raise ValueError(f"tables too short for k_max={k_max}")
    d = [policy.ctx.zero] * 2
    for k in range(1, k_max):
        sigma = [omega[i] + d[i] for i in range(k)]
        inner = alpha[k]
        for j in range(1, k):
            inner += alpha[k - j] * sum(comb(j - 1, i) * sigma[i + 1] for i in range(j))
        d.append((x + shift) * d[k] + z * inner)
    return tuple(d)


def ratio_to_phi(p: FactorialPolynomial, n: int, x):
    """p(x) / phi_n(x)."""
    return p(x) / falling_factorial(n, x)


def _window(lo: int, hi: int):
    return range(lo, hi + 1)


def gamma_residuals(fam: Families, window: tuple) -> list:
    exp = gamma_expansion(fam.params, fam.policy)
    return [(n, fam.seqs.gamma[n] - exp.evaluate(n)) for n in _window(*window)]


def beta_residuals(fam: Families, window: tuple) -> list:
    exp = beta_expansion(fam.params, fam.policy)
    return [(n, fam.seqs.beta[n] - exp.evaluate(n)) for n in _window(*window)]


def alpha_residuals(fam: Families, window: tuple) -> list:
    """a_n/z - sum_{k<=3} alpha_k n^-k."""
    _, z, _ = fam.params.reals(fam.policy)
    exp = a_expansion(fam.params, fam.policy)
    return [(n, fam.S.a[n] / z - exp.evaluate(n)) for n in _window(*window)]


def omega_residuals(fam: Families, x, window: tuple) -> list:
    x = to_real(fam.policy.ctx, x)
    exp = omega_expansion(x, fam.params, fam.policy)
    return [(n, ratio_to_phi(fam.P[n], n, x) - exp.evaluate(n)) for n in _window(*window)]


def sobolev_ratio_difference(fam: Families, n: int, x):
    """S_n(x)/phi_n(x) - P_n(x)/phi_n(x)."""
    x = to_real(fam.policy.ctx, x)
    return ratio_to_phi(fam.S[n], n, x) - ratio_to_phi(fam.P[n], n, x)


def sigma_difference_residuals(fam: Families, x, window: tuple, corrected: bool = True) -> list:
    """(S_n - P_n)/phi_n - d_2/n^2 - d_3/n^3."""
    d = sigma_coeffs(x, fam.params, fam.policy, corrected)["d"]
    return [
        (n, sobolev_ratio_difference(fam, n, x) - d[2] / n**2 - d[3] / n**3)
        for n in _window(*window)
    ]


def alpha3_estimate(fam: Families, n: int):
    """(a_n/z - 1/n - alpha_2/n^2) n^3."""
    _, z, _ = fam.params.reals(fam.policy)
    _, a2, _ = alpha_coeffs(fam.params, fam.policy)
    return (fam.S.a[n] / z - to_real(fam.policy.ctx, 1) / n - a2 / n**2) * n**3


def d2_estimate(fam: Families, n: int, x):
    return n**2 * sobolev_ratio_difference(fam, n, x)


def d3_estimate(fam: Families, n: int, x):
    _, z, _ = fam.params.reals(fam.policy)
    return n**3 * (sobolev_ratio_difference(fam, n, x) - z / n**2)


def richardson(values: dict, order: int):
    """Richardson extrapolation of s_n = L + c_1/n + ... + c_order/n^order + ...

    ``values`` maps consecutive integers n0..n0+order to s_n.
    """
    n0 = min(values)
    total = 0
    for k in range(order + 1):
        n = n0 + k
        sign = -1 if (k + order) % 2 else 1
        total += sign * values[n] * n**order / (_fact(k) * _fact(order - k))
    return total


def _fact(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def measure_omega4(fam: Families, x, n_top: int | None = None, order: int = 6):
    """Numerical omega_4(x): Richardson limit of n^4 (P_n/phi_n - sum_{k<=3} omega_k n^-k).

    No closed form is used; the value is measured.
    """
    n_top = len(fam.P) - 2 if n_top is None else n_top
    res = dict(omega_residuals(fam, x, (n_top - order, n_top)))
    return richardson({n: r * n**4 for n, r in res.items()}, order)


def sigma4_measured(fam: Families, x, corrected: bool = True):
    """sigma_4 = omega_4 (measured) + d_4; flagged as partly measured."""
    w4 = measure_omega4(fam, x)
    d4 = sigma_coeffs(x, fam.params, fam.policy, corrected)["d"][4]
    return {"omega4_measured": w4, "d4": d4, "sigma4": w4 + d4, "source": "measured"}


def limit_checks(fam: Families, window: tuple = (40, 80), tolerance: float = 0.05) -> dict:
    """n^2 h_{n+1}/htilde_n -> z^2/lambda and htilde_n/(n^2 h_n) -> lambda/z."""
    _, z, lam = fam.params.reals(fam.policy)
    h, ht = fam.seqs.h, fam.S.h_tilde
    t1, t2 = z**2 / lam, lam / z
    s1 = [(n, n**2 * h[n + 1] / ht[n]) for n in _window(*window)]
    s2 = [(n, ht[n] / (n**2 * h[n])) for n in _window(*window)]
    dev1 = abs(s1[-1][1] / t1 - 1)
    dev2 = abs(s2[-1][1] / t2 - 1)
    return {
        "h_next_over_htilde": {"target": t1, "values": s1, "deviation": dev1, "pass": dev1 < tolerance},
        "htilde_over_h": {"target": t2, "values": s2, "deviation": dev2, "pass": dev2 < tolerance},
    }


@dataclass(frozen=True)
class OrderFit:
    points: tuple
    fitted_slope: float
    fitted_constant: float


def fit_order(residuals, tolerance=None) -> OrderFit:
    """Least-squares line through (log n, log |r_n|)."""
    residuals = list(residuals)
    if len(residuals) < 5:
        raise ValueError("need at least 5 points")
    if tolerance is not None and all(abs(r) <= tolerance for _, r in residuals):
        raise DegenerateFit("all residuals below tolerance")
    if any(not r for _, r in residuals):
        raise ValueError("residuals must be nonzero")
    logn = np.array([np.log(n) for n, _ in residuals])
    logr = np.array([_log_abs(r) for _, r in residuals])
    slope, const = np.polyfit(logn, logr, 1)
    return OrderFit(tuple(residuals), float(slope), float(const))


def _log_abs(r) -> float:
    if hasattr(r, "_mpf_"):
        return float(r.context.log(abs(r)))
    return float(np.log(abs(r)))
