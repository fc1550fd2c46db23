"""
N-party cyclic entropic witness and the conjugate-correlation limit.
"""
from dataclasses import dataclass, field

import numpy as np

from entrobound.errors import ValidationError
from entrobound.linalg import PureState, bipartitions, subsystem_entropy
from entrobound.witness import omega, shannon_conditional

VIOLATION_TOL = 1e-9


@dataclass(frozen=True)
class CyclicWitnessReport:
    """
    :ivar n: party count
    :ivar lhs: Σ_i H(Q_i|Q_{i+1}) + H(R_i|all other R), indices wrapping around
    :ivar rhs: 2 log2 Ω
    :ivar violated: True when lhs < rhs, witnessing genuine N-partite entanglement
    :ivar terms: the individual conditional entropies, keyed by party label
    """

    n: int
    lhs: float
    rhs: float
    violated: bool
    terms: dict = field(default_factory=dict)
    low_counts: bool = False

    def as_json(self):
        return {"n": self.n, "lhs": self.lhs, "rhs": self.rhs, "violated": self.violated,
                "terms": dict(self.terms), "low_counts": self.low_counts}


def _uniform_dimension(dist_q, dist_r, what):
    if dist_q.dims != dist_r.dims:
        raise ValidationError("%s: Q outcomes %s do not match R outcomes %s" % (what, dist_q.dims, dist_r.dims))
    if len(set(dist_q.dims)) != 1:
        raise ValidationError("%s: every party needs the same local dimension, got %s" % (what, dist_q.dims))
    return dist_q.dims[0]


def cyclic_witness(dist_q, dist_r, pair):
    """
    Evaluates Σ_{i=1}^{N} (H(Q_i|Q_{i+1}) + H(R_i|R_{i+1},...,R_{i+N-1})) >= 2 log2 Ω.
    A violation witnesses genuine N-partite entanglement.

    :param dist_q: N-party distribution of the Q setting
    :type dist_q: :class:`entrobound.witness.JointDistribution`

    :param dist_r: N-party distribution of the R setting
    :type dist_r: :class:`entrobound.witness.JointDistribution`

    :param pair: measurement bases behind the distributions
    :type pair: :class:`entrobound.witness.MeasurementPair`

    :rtype: :class:`CyclicWitnessReport`
    """
    n = dist_q.parties
    if n < 3:
        raise ValidationError("cyclic witness: at least 3 parties are required, got %d" % n)
    if dist_r.parties != n:
        raise ValidationError("cyclic witness: Q covers %d parties but R covers %d" % (n, dist_r.parties))
    d = _uniform_dimension(dist_q, dist_r, "cyclic witness")
    if d != pair.dim:
        raise ValidationError("cyclic witness: local dimension %d does not match basis dimension %d" % (d, pair.dim))

    terms = {}
    lhs = 0.0
    for i in range(n):
        h_q = shannon_conditional(dist_q, i, (i + 1) % n)
        h_r = shannon_conditional(dist_r, i, [(i + k) % n for k in range(1, n)])
        terms["H(Q%d|Q%d)" % (i + 1, (i + 1) % n + 1)] = h_q
        terms["H(R%d|rest)" % (i + 1)] = h_r
        lhs += h_q + h_r
    rhs = 2.0 * float(np.log2(omega(pair)))
    return CyclicWitnessReport(n, lhs, rhs, lhs < rhs - VIOLATION_TOL, terms)


def conjugate_correlation_defect(dist_q, dist_r, d, pair=None):
    """
    H(Q_1..Q_{N-1}|Q_N) + H(R_1..R_{N-1}|R_N) - (N-2) log2 d. Never negative for a
    maximally conjugate pair: perfect correlation in both settings is only possible for N = 2.

    :param d: local dimension
    :type d: int

    :param pair: when given, the bases are checked to be maximally conjugate (Ω = d)
    :type pair: :class:`entrobound.witness.MeasurementPair`

    :rtype: float
    """
    dim = _uniform_dimension(dist_q, dist_r, "conjugate correlation")
    if dim != d:
        raise ValidationError("conjugate correlation: outcome count %d does not match d=%d" % (dim, d))
    if pair is not None and omega(pair) < d - 1e-9:
        raise ValidationError("conjugate correlation: bases are not maximally conjugate (Ω=%.6g < %d)"
                              % (omega(pair), d))
    n = dist_q.parties
    head = list(range(n - 1))
    total = shannon_conditional(dist_q, head, n - 1) + shannon_conditional(dist_r, head, n - 1)
    return float(total - (n - 2) * np.log2(d))


def pure_enf(state):
    """
    Exact E_NF of a pure N-party state: the smallest subsystem entropy over all bipartite splits

    :type state: :class:`entrobound.linalg.PureState`

    :rtype: float
    """
    if not isinstance(state, PureState):
        raise ValidationError("pure E_NF: a PureState is required")
    n = state.signature.parties
    if n < 2:
        raise ValidationError("pure E_NF: at least 2 parties are required")
    return min(subsystem_entropy(state, side) for side in bipartitions(n))
