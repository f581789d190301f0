from fractions import Fraction

import mpmath
import pytest

from charlier_sobolev.arith import PrecisionPolicy, relative_error
from charlier_sobolev.charlier import (
    DivergedFromOracle,
    build_coeffs_laguerre_freud,
    build_Pn_gram,
    check_delta_identity,
    norms_from_hankel,
    orthogonality_residual,
    lowered_structure_identities,
    structure_coeffs,
    three_term_residual,
)
from charlier_sobolev.functional import MomentTable, Params

from oracles import stieltjes

TOL = mpmath.mpf("1e-60")

# Stieltjes procedure on the lattice at b = 1/2, z = 1 (25 digits)
FROZEN = {
    "beta": ["0.5373147207275480958778098", "1.221880330361853832581346", "2.084633759700043967385022"],
    "gamma": ["0", "0.4426355305257029486855319", "0.7126278136575790026194927"],
    "h": ["1.813430203923509383834107", "0.8026886403850162610113776", "0.5720182508453488116123508"],
}


def test_frozen_values(charlier, policy):
    _, seqs = charlier
    for key, values in FROZEN.items():
        for n, v in enumerate(values):
            assert abs(getattr(seqs, key)[n] - policy.ctx.mpf(v)) < 1e-24


@pytest.mark.parametrize("b, z", [(Fraction(1, 2), 1), (0, Fraction(1, 3)), (Fraction(5, 2), 4)])
def test_against_stieltjes(b, z):
    pol = PrecisionPolicy.from_bits(340)
    params = Params(b, z)
    _, seqs = build_Pn_gram(8, MomentTable.build(params, 9, pol))
    beta, gamma, h = stieltjes(pol.real(params.b), pol.real(params.z), 8)
    for n in range(9):
        assert relative_error(seqs.beta[n], beta[n]) < 1e-80
        assert relative_error(seqs.h[n], h[n]) < 1e-80
        if n:
            assert relative_error(seqs.gamma[n], gamma[n]) < 1e-80


def test_gamma0_zero(charlier):
    assert charlier[1].gamma[0] == 0


def test_orthogonality(charlier, table):
    P, seqs = charlier
    assert orthogonality_residual(P, seqs.h, table.bilinear, 20) < TOL


def test_three_term(charlier):
    P, seqs = charlier
    assert max(three_term_residual(n, P, seqs) for n in range(20)) < TOL


def test_monic(charlier):
    P, _ = charlier
    assert all(P[n].leading == 1 and P[n].degree == n for n in range(21))


def test_norms_are_gamma_products(charlier):
    _, seqs = charlier
    for n in range(1, 21):
        assert relative_error(seqs.h[n], seqs.h[n - 1] * seqs.gamma[n]) < 1e-150


def test_norms_against_hankel(charlier, table):
    hk = norms_from_hankel(table, 8)
    assert max(relative_error(charlier[1].h[n], hk[n]) for n in range(9)) < TOL


def test_delta_identity(charlier):
    P, seqs = charlier
    assert max(check_delta_identity(n, P, seqs) for n in range(2, 21)) < TOL


def test_structure_coeffs(charlier, params):
    _, seqs = charlier
    c = structure_coeffs(5, seqs, params)
    assert c[0] == 1 and c[-1] == 5
    assert c[-2] == seqs.gamma[5] * seqs.gamma[4]


def test_lowered_structure_identities(charlier):
    _, seqs = charlier
    for n in range(2, 20):
        r1, r2 = lowered_structure_identities(n, seqs)
        assert r1 < 1e-40 and r2 < 1e-40


def test_xi(charlier):
    _, seqs = charlier
    assert seqs.xi[0] is None and seqs.xi[1] is None
    assert seqs.xi[3] == seqs.gamma[3] * seqs.gamma[2] / seqs.z


def test_laguerre_freud_agrees(charlier, params, policy):
    _, seqs = charlier
    lf = build_coeffs_laguerre_freud(15, params, seqs.beta[0], seqs.gamma[1], policy)
    for n in range(1, 16):
        assert relative_error(lf.beta[n], seqs.beta[n]) < 1e-20
        assert relative_error(lf.gamma[n], seqs.gamma[n]) < 1e-20


def test_laguerre_freud_loses_digits_with_n(params):
    pol = PrecisionPolicy.from_bits(128)
    _, seqs = build_Pn_gram(40, MomentTable.build(params, 41, pol))
    try:
        lf = build_coeffs_laguerre_freud(40, params, seqs.beta[0], seqs.gamma[1], pol)
    except DivergedFromOracle as exc:
        lf = exc.partial
    early = relative_error(lf.gamma[5], seqs.gamma[5])
    late = relative_error(lf.gamma[len(lf.gamma) - 2], seqs.gamma[len(lf.gamma) - 2])
    assert late > early * 1e10


def test_table_too_small(table):
    with pytest.raises(ValueError):
        build_Pn_gram(table.n_max, table)
