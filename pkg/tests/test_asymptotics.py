import random
from fractions import Fraction

import pytest

from charlier_sobolev.arith import PrecisionPolicy, relative_error
from charlier_sobolev.asymptotics import (
    DegenerateFit,
    alpha_coeffs,
    d3_estimate,
    fit_order,
    gamma_residuals,
    limit_checks,
    measure_omega4,
    omega_residuals,
    richardson,
    sigma_coeffs,
    sigma_difference_residuals,
    sigma_differences_from_recursion,
)
from charlier_sobolev.families import build_families
from charlier_sobolev.functional import Params


def random_tuples(count, seed):
    rng = random.Random(seed)
    for _ in range(count):
        yield (
            Params(Fraction(rng.randint(-9, 40), 10), Fraction(rng.randint(1, 40), 10), Fraction(rng.randint(1, 40), 10)),
            Fraction(rng.randint(-50, 50), 10),
        )


@pytest.mark.parametrize("shift, corrected", [(0, False), (1, True)])
def test_generator_reproduces_tables(shift, corrected):
    pol = PrecisionPolicy()
    for params, x in random_tuples(10, 11 + shift):
        gen = sigma_differences_from_recursion(x, params, pol, shift=shift)
        table = sigma_coeffs(x, params, pol, corrected=corrected)["d"]
        for k in (2, 3, 4):
            assert relative_error(gen[k], table[k]) < 1e-100


def test_tables_differ_only_through_x_shift():
    pol = PrecisionPolicy()
    params = Params(Fraction(1, 4), Fraction(7, 10), 2)
    fixed = sigma_coeffs(Fraction(1, 2), params, pol, corrected=True)["d"]
    bare = sigma_coeffs(Fraction(1, 2), params, pol, corrected=False)["d"]
    assert fixed[2] == bare[2]
    assert relative_error(fixed[3] - bare[3], pol.real(params.z)) < 1e-150


def test_alpha_coeffs(params, policy):
    a1, a2, a3 = alpha_coeffs(params, policy)
    assert a1 == 1 and a2 == 0 and a3 == -0.75
    with pytest.raises(ValueError):
        alpha_coeffs(Params(1, 1, 0), policy)


def test_richardson_exact_on_polynomial_in_inverse_n():
    vals = {n: 2 + Fraction(3, n) - Fraction(5, n**2) + Fraction(1, n**3) for n in range(10, 14)}
    assert richardson(vals, 3) == 2


def test_fit_order_synthetic():
    fit = fit_order([(n, 7.0 / n**3) for n in range(10, 30)])
    assert abs(fit.fitted_slope + 3) < 1e-12
    with pytest.raises(DegenerateFit):
        fit_order([(n, 1e-200) for n in range(5)], tolerance=1e-100)
    with pytest.raises(ValueError):
        fit_order([(1, 1.0)])


def test_gamma_and_omega_orders(fam80):
    assert abs(fit_order(gamma_residuals(fam80, (30, 60))).fitted_slope + 4) < 0.5
    assert abs(fit_order(omega_residuals(fam80, -1, (30, 60))).fitted_slope + 4) < 0.5
    assert abs(fit_order(omega_residuals(fam80, Fraction(1, 2), (30, 60))).fitted_slope + 4) < 0.5


@pytest.fixture(scope="module")
def fam_generic():
    return build_families(Params(Fraction(1, 4), Fraction(7, 10), 2), 80, PrecisionPolicy())


@pytest.mark.parametrize("x", [Fraction(-5, 2), Fraction(1, 2)])
def test_corrected_d3_at_generic_point(fam_generic, x):
    fam = fam_generic
    d_fixed = sigma_coeffs(x, fam.params, fam.policy, corrected=True)["d"]
    d_bare_x = sigma_coeffs(x, fam.params, fam.policy, corrected=False)["d"]
    measured = d3_estimate(fam, 80, x)
    assert abs(measured / d_fixed[3] - 1) < 0.10
    assert abs(measured / d_bare_x[3] - 1) > 0.3
    assert abs(fit_order(sigma_difference_residuals(fam, x, (30, 60), True)).fitted_slope + 4) < 0.5
    assert abs(fit_order(sigma_difference_residuals(fam, x, (30, 60), False)).fitted_slope + 3) < 0.5


def test_omega4_measurement_is_stable(fam80):
    values = [measure_omega4(fam80, -1, order=o) for o in (5, 6, 7)]
    assert abs(values[-1] - values[-2]) < 1e-9
    assert abs(values[-2] - values[-3]) < 1e-8


def test_limits(fam80):
    lim = limit_checks(fam80)
    assert lim["h_next_over_htilde"]["pass"] and lim["htilde_over_h"]["pass"]
