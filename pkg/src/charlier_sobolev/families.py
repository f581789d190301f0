"""One-call construction of everything derived from a parameter triple."""
from __future__ import annotations

from dataclasses import dataclass

from .arith import DEFAULT_POLICY, PrecisionPolicy
from .charlier import CoeffSequences, OrthogonalPolySet, build_Pn_gram
from .functional import MomentTable, Params
from .sobolev import SobolevSet, build_Sn


@dataclass(frozen=True)
class Families:
    table: MomentTable
    P: OrthogonalPolySet
    seqs: CoeffSequences
    S: SobolevSet

    @property
    def params(self) -> Params:
        return self.table.params

    @property
    def policy(self) -> PrecisionPolicy:
        return self.table.policy


def build_families(params: Params, N: int, policy: PrecisionPolicy = DEFAULT_POLICY) -> Families:
    """Moments, P_0..P_{N+1} with Gram-route coefficients, and S_0..S_N with a_1..a_N."""
    table = MomentTable.build(params, N + 1, policy)
    P, seqs = build_Pn_gram(N, table)
    S = build_Sn(N, table, seqs)
    return Families(table, P, seqs, S)
