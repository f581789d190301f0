"""Generalized Charlier and Delta-Sobolev orthogonal polynomials in arbitrary precision."""
from .arith import DEFAULT_POLICY, NonConvergent, NotPositiveDefinite, PrecisionPolicy, Singular
from .basis import FactorialPolynomial, falling_factorial, linearize, stirling1, stirling2
from .charlier import CoeffSequences, DivergedFromOracle, OrthogonalPolySet, build_coeffs_laguerre_freud, build_Pn_gram
from .families import Families, build_families
from .functional import MomentTable, Params, apply_L, moment_nu
from .sobolev import SobolevSet, build_Sn
from .verify import run_verify

__all__ = [
    "DEFAULT_POLICY",
    "CoeffSequences",
    "DivergedFromOracle",
    "FactorialPolynomial",
    "Families",
    "MomentTable",
    "NonConvergent",
    "NotPositiveDefinite",
    "OrthogonalPolySet",
    "Params",
    "PrecisionPolicy",
    "Singular",
    "SobolevSet",
    "apply_L",
    "build_Pn_gram",
    "build_Sn",
    "build_coeffs_laguerre_freud",
    "build_families",
    "falling_factorial",
    "linearize",
    "moment_nu",
    "run_verify",
    "stirling1",
    "stirling2",
]
