"""
Tripartite entropic witness and E3F lower bounds.

Two routes lead to the violation V = -S(A|BC) - S(B|AC) - S(C|AB) - 2 log2 D_max:
the exact one evaluates the quantum conditional entropies of a known state, the
measured one bounds each -S(X|rest) from the Shannon entropies of two joint
measurement distributions through the entropic uncertainty relation.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import pandas as pd

from entrobound.errors import ValidationError
from entrobound.linalg import (PureState, as_density, conditional_vn_entropy, party_label,
                               subsystem_entropy)

logger = logging.getLogger(__name__)

ORTHONORMAL_TOL = 1e-12
PROBABILITY_TOL = 1e-10
ZERO_PROBABILITY = 1e-15


class Method(Enum):
    """
    How a :class:`WitnessReport` was obtained

    :cvar EXACT_QUANTUM: from the quantum conditional entropies of a known state
    :cvar MEASURED: from measured joint distributions
    :cvar PURE_MIN: minimum per-party measured bound, valid for pure states only
    """

    EXACT_QUANTUM = "exact-quantum"
    MEASURED = "measured"
    PURE_MIN = "pure-min"


class ObservableBasis(object):
    """
    **Orthonormal eigenbasis of a local observable**

    :ivar vectors: d x d matrix whose columns are the eigenvectors
    :vartype vectors: numpy.ndarray

    :ivar labels: outcome names, one per column
    :vartype labels: list(str)
    """

    def __init__(self, vectors, labels=None):
        vectors = np.array(vectors, dtype=complex)
        if vectors.ndim != 2 or vectors.shape[0] != vectors.shape[1]:
            raise ValidationError("basis: expected a square matrix of column vectors, got shape %s"
                                  % (vectors.shape,))
        gram = vectors.conj().T @ vectors
        if np.max(np.abs(gram - np.eye(vectors.shape[0]))) > ORTHONORMAL_TOL:
            raise ValidationError("basis: vectors are not orthonormal within %g" % ORTHONORMAL_TOL)
        vectors.setflags(write=False)
        self.vectors = vectors
        self.labels = list(labels) if labels is not None else [str(i) for i in range(vectors.shape[0])]
        if len(self.labels) != self.dim:
            raise ValidationError("basis: %d labels for %d outcomes" % (len(self.labels), self.dim))

    @property
    def dim(self):
        return self.vectors.shape[0]


def pauli_basis(name):
    """
    Eigenbasis of the Pauli operator "x", "y" or "z"; outcome 0 is the +1 eigenvector

    :rtype: :class:`ObservableBasis`
    """
    s = 1.0 / np.sqrt(2.0)
    bases = {
        "z": np.array([[1, 0], [0, 1]], dtype=complex),
        "x": np.array([[s, s], [s, -s]], dtype=complex),
        "y": np.array([[s, s], [1j * s, -1j * s]], dtype=complex),
    }
    key = name.strip().lower()
    if key not in bases:
        raise ValidationError("basis: unknown Pauli basis '%s' (expected x, y or z)" % name)
    return ObservableBasis(bases[key], labels=["+", "-"])


def fourier_basis(d):
    """
    Discrete Fourier basis of dimension d, maximally unbiased with the computational basis
    """
    k = np.arange(d)
    return ObservableBasis(np.exp(2j * np.pi * np.outer(k, k) / d) / np.sqrt(d))


def computational_basis(d):
    return ObservableBasis(np.eye(d, dtype=complex))


@dataclass(frozen=True)
class MeasurementPair:
    """
    The two measurement settings Q and R, applied by every party
    """

    q: ObservableBasis
    r: ObservableBasis

    def __post_init__(self):
        if self.q.dim != self.r.dim:
            raise ValidationError("measurement pair: Q has dimension %d but R has %d" % (self.q.dim, self.r.dim))

    @property
    def dim(self):
        return self.q.dim

    @classmethod
    def from_names(cls, q="z", r="x"):
        return cls(pauli_basis(q), pauli_basis(r))


class JointDistribution(object):
    """
    **Probability table over the outcome tuples of N parties**

    :ivar dims: outcome counts per party
    :vartype dims: tuple(int)

    :ivar probs: read-only array of shape ``dims``
    :vartype probs: numpy.ndarray
    """

    def __init__(self, probs, dims=None):
        probs = np.array(probs, dtype=float)
        if dims is not None:
            probs = probs.reshape(tuple(dims))
        if not np.all(np.isfinite(probs)):
            raise ValidationError("distribution: non-finite probability")
        if np.any(probs < -PROBABILITY_TOL):
            raise ValidationError("distribution: negative probability %.3g" % probs.min())
        total = probs.sum()
        if not abs(total - 1.0) <= PROBABILITY_TOL:
            raise ValidationError("distribution: probabilities sum to %.15g, not 1" % total)
        probs = np.clip(probs, 0.0, None)
        probs.setflags(write=False)
        self.probs = probs
        self.dims = probs.shape

    @property
    def parties(self):
        return len(self.dims)

    def marginal(self, parties):
        """
        Marginal table over ``parties`` (kept in the given order)
        """
        parties = [int(p) for p in parties]
        others = tuple(p for p in range(self.parties) if p not in parties)
        table = self.probs.sum(axis=others) if others else self.probs
        kept = sorted(parties)
        return np.transpose(table, [kept.index(p) for p in parties])


def _parties_arg(parties):
    if isinstance(parties, (int, np.integer)):
        return [int(parties)]
    return [int(p) for p in parties]


def shannon_entropy(dist, parties=None):
    """
    Shannon entropy in bits of the marginal over ``parties`` (all parties by default)

    :rtype: float
    """
    if parties is None:
        parties = range(dist.parties)
    parties = _parties_arg(parties)
    if not parties:
        return 0.0
    p = dist.marginal(parties).ravel()
    p = p[p > ZERO_PROBABILITY]
    return float(-np.sum(p * np.log2(p)))


def shannon_conditional(dist, target, given):
    """
    H(target | given) = H(target, given) - H(given)

    :param dist: joint distribution
    :type dist: :class:`JointDistribution`

    :param target: party index or indices
    :param given: conditioning party indices

    :rtype: float
    """
    target = _parties_arg(target)
    given = _parties_arg(given)
    if set(target) & set(given):
        raise ValidationError("conditional entropy: target %s overlaps given %s" % (target, given))
    for p in target + given:
        if p < 0 or p >= dist.parties:
            raise ValidationError("conditional entropy: party %d out of range" % p)
    value = shannon_entropy(dist, target + given) - shannon_entropy(dist, given)
    return max(value, 0.0)


def omega(pair):
    """
    Incompatibility Ω = min_{i,j} 1/|<q_i|r_j>|², between 1 and the dimension

    :type pair: :class:`MeasurementPair`

    :rtype: float
    """
    overlaps = np.abs(pair.q.vectors.conj().T @ pair.r.vectors) ** 2
    # rounding can push 1/max past the dimension for mutually unbiased bases
    return float(np.clip(1.0 / overlaps.max(), 1.0, pair.dim))


def measurement_distribution(rho, bases):
    """
    Joint outcome distribution of local projective measurements, one basis per party

    :param rho: state being measured
    :type rho: :class:`DensityMatrix` or :class:`PureState`

    :param bases: one basis per party (a single basis is applied to every party)
    :type bases: list(:class:`ObservableBasis`)

    :rtype: :class:`JointDistribution`
    """
    rho = as_density(rho)
    dims = rho.signature.dims
    if isinstance(bases, ObservableBasis):
        bases = [bases] * len(dims)
    if len(bases) != len(dims):
        raise ValidationError("measurement: %d bases for %d parties" % (len(bases), len(dims)))
    unitary = np.ones((1, 1), dtype=complex)
    for basis, d in zip(bases, dims):
        if basis.dim != d:
            raise ValidationError("measurement: basis of dimension %d on a party of dimension %d" % (basis.dim, d))
        unitary = np.kron(unitary, basis.vectors)
    probs = np.einsum("ia,ij,ja->a", unitary.conj(), rho.elements, unitary).real
    probs = np.clip(probs, 0.0, None)
    return JointDistribution(probs / probs.sum(), dims)


@dataclass(frozen=True)
class WitnessReport:
    """
    **Outcome of a witness evaluation**

    :ivar method: how the terms were obtained
    :ivar terms: per-party value (or lower bound) of -S(X|rest), keyed "A|BC", ...
    :ivar omega: Ω per party (measured routes only)
    :ivar d_max: largest local dimension
    :ivar v_bound: violation V (or its measured lower bound)
    :ivar e3f_lower: resulting lower bound on E3F
    :ivar applicable: False when the pure-state minimum precondition fails
    :ivar details: conditional Shannon entropies behind the measured terms
    """

    method: Method
    terms: dict
    omega: dict
    d_max: int
    v_bound: float
    e3f_lower: float
    applicable: bool = True
    details: dict = field(default_factory=dict)

    def as_json(self):
        return {"method": self.method.value, "terms": dict(self.terms), "omega": dict(self.omega),
                "d_max": self.d_max, "v_bound": self.v_bound, "e3f_lower": self.e3f_lower,
                "applicable": self.applicable, "details": dict(self.details)}


def _term_label(target, n=3):
    rest = "".join(party_label(p) for p in range(n) if p != target)
    return "%s|%s" % (party_label(target), rest)


def _require_tripartite(parties, what):
    if parties != 3:
        raise ValidationError("%s: the tripartite witness needs exactly 3 parties, got %d" % (what, parties))


def quantum_witness_v(rho):
    """
    Exact violation V from the quantum conditional entropies; E3F >= max(V, 0)

    :param rho: three-party state
    :type rho: :class:`DensityMatrix` or :class:`PureState`

    :rtype: :class:`WitnessReport`
    """
    rho = as_density(rho)
    _require_tripartite(rho.signature.parties, "exact witness")
    d_max = rho.signature.d_max
    terms = {}
    for target in range(3):
        rest = [p for p in range(3) if p != target]
        terms[_term_label(target)] = -conditional_vn_entropy(rho, target, rest)
    v = sum(terms.values()) - 2.0 * np.log2(d_max)
    return WitnessReport(Method.EXACT_QUANTUM, terms, {}, d_max, float(v), float(max(v, 0.0)))


def measured_neg_cond_bound(dist_q, dist_r, pair, target):
    """
    Lower bound on -S(target|rest): log2 Ω - H(Q_t|Q_rest) - H(R_t|R_rest)

    :param dist_q: distribution measured with Q on every party
    :type dist_q: :class:`JointDistribution`

    :param dist_r: distribution measured with R on every party
    :type dist_r: :class:`JointDistribution`

    :param pair: the bases used for the two distributions
    :type pair: :class:`MeasurementPair`

    :param target: party index
    :type target: int

    :rtype: float
    """
    _check_distributions(dist_q, dist_r, pair)
    rest = [p for p in range(dist_q.parties) if p != target]
    h_q = shannon_conditional(dist_q, target, rest)
    h_r = shannon_conditional(dist_r, target, rest)
    return float(np.log2(omega(pair)) - h_q - h_r)


def _check_distributions(dist_q, dist_r, pair):
    if dist_q.dims != dist_r.dims:
        raise ValidationError("measured witness: Q outcomes %s do not match R outcomes %s" % (dist_q.dims, dist_r.dims))
    if any(d != pair.dim for d in dist_q.dims):
        raise ValidationError("measured witness: outcome counts %s do not match basis dimension %d"
                              % (dist_q.dims, pair.dim))


def _measured_terms(dist_q, dist_r, pair):
    _check_distributions(dist_q, dist_r, pair)
    terms, details = {}, {}
    log_omega = float(np.log2(omega(pair)))
    for target in range(dist_q.parties):
        rest = [p for p in range(dist_q.parties) if p != target]
        label = _term_label(target, dist_q.parties)
        h_q = shannon_conditional(dist_q, target, rest)
        h_r = shannon_conditional(dist_r, target, rest)
        details["H(Q_%s)" % label] = h_q
        details["H(R_%s)" % label] = h_r
        terms[label] = log_omega - h_q - h_r
    omegas = {party_label(p): 2.0 ** log_omega for p in range(dist_q.parties)}
    return terms, omegas, details


def measured_witness_v(dist_q, dist_r, pair, signature=None):
    """
    Measured lower bound on V: Σ_parties (log2 Ω - H(Q_X|Q_rest) - H(R_X|R_rest)) - 2 log2 D_max

    :param signature: signature of the measured state; D_max is taken from it when given
    :type signature: :class:`entrobound.linalg.SubsystemSignature`

    :rtype: :class:`WitnessReport`
    """
    _require_tripartite(dist_q.parties, "measured witness")
    d_max = max(dist_q.dims)
    if signature is not None:
        if tuple(signature.dims) != tuple(dist_q.dims):
            raise ValidationError("measured witness: state dims %s disagree with outcome counts %s"
                                  % (signature.dims, dist_q.dims))
        d_max = signature.d_max
    terms, omegas, details = _measured_terms(dist_q, dist_r, pair)
    v = sum(terms.values()) - 2.0 * np.log2(d_max)
    return WitnessReport(Method.MEASURED, terms, omegas, d_max, float(v), float(max(v, 0.0)), details=details)


def pure_min_bound(dist_q, dist_r, pair):
    """
    For a state known to be pure: the smallest per-party measured bound on -S(X|rest),
    applicable only when all three bounds are positive

    :rtype: :class:`WitnessReport`
    """
    _require_tripartite(dist_q.parties, "pure-state bound")
    terms, omegas, details = _measured_terms(dist_q, dist_r, pair)
    smallest = float(min(terms.values()))
    applicable = smallest > 0.0
    return WitnessReport(Method.PURE_MIN, terms, omegas, max(dist_q.dims), smallest,
                         smallest if applicable else 0.0, applicable=applicable, details=details)


def pure_e3f(state):
    """
    Exact E3F of a pure tripartite state: the smallest single-party entropy

    :type state: :class:`entrobound.linalg.PureState`

    :rtype: float
    """
    if not isinstance(state, PureState):
        raise ValidationError("pure E3F: a PureState is required")
    _require_tripartite(state.signature.parties, "pure E3F")
    return min(subsystem_entropy(state, [p]) for p in range(3))


@dataclass(frozen=True)
class CountsData:
    """
    Normalized distributions read from a counts file

    :ivar dist_q: distribution of the Q setting
    :ivar dist_r: distribution of the R setting
    :ivar totals: raw count total per setting
    :ivar low_counts: True when a setting has fewer counts than the warning threshold
    """

    dist_q: JointDistribution
    dist_r: JointDistribution
    totals: dict
    low_counts: bool


def read_counts_csv(path, min_total=1000, dim=None):
    """
    Reads a counts file with header ``setting,outcome_A,outcome_B,...,count`` where ``setting``
    is Q or R and outcomes are integer indices. Counts are normalized per setting; raw plug-in
    estimates, no bias correction.

    :param path: CSV path
    :type path: str

    :param min_total: count total below which a setting is flagged as unreliable
    :type min_total: int

    :param dim: outcomes per party; inferred from the largest outcome index when omitted
    :type dim: int

    :rtype: :class:`CountsData`
    """
    try:
        frame = pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ValidationError("counts csv: %s: %s" % (path, e))
    columns = list(frame.columns)
    outcome_columns = [c for c in columns if c.startswith("outcome_")]
    if not columns or columns[0] != "setting" or columns[-1] != "count" or len(outcome_columns) != len(columns) - 2:
        raise ValidationError("counts csv: header must be setting,outcome_A,...,count; got %s" % ",".join(columns))
    if len(outcome_columns) < 2:
        raise ValidationError("counts csv: at least two outcome columns are required")
    settings = set(frame["setting"].astype(str).str.strip().str.upper())
    if settings != {"Q", "R"}:
        raise ValidationError("counts csv: settings must be exactly Q and R, got %s" % sorted(settings))
    outcomes = frame[outcome_columns]
    if not all(pd.api.types.is_integer_dtype(outcomes[c]) for c in outcome_columns):
        raise ValidationError("counts csv: outcome columns must hold integer indices")
    counts = frame["count"]
    if not pd.api.types.is_numeric_dtype(counts) or counts.isna().any():
        raise ValidationError("counts csv: every row needs a numeric count")
    if not np.isfinite(counts.to_numpy(dtype=float)).all() or (counts < 0).any():
        raise ValidationError("counts csv: counts must be finite non-negative numbers")
    if (outcomes < 0).any().any():
        raise ValidationError("counts csv: outcome indices must be non-negative")
    if dim is None:
        dim = int(outcomes.values.max()) + 1
    dims = (dim,) * len(outcome_columns)

    distributions, totals = {}, {}
    labels = frame["setting"].astype(str).str.strip().str.upper()
    for setting in ("Q", "R"):
        rows = frame[labels == setting]
        table = np.zeros(dims)
        for index, count in zip(rows[outcome_columns].itertuples(index=False, name=None), rows["count"]):
            if any(i >= dim for i in index):
                raise ValidationError("counts csv: outcome %s exceeds dimension %d" % (index, dim))
            table[index] += count
        total = float(table.sum())
        if not total > 0:
            raise ValidationError("counts csv: setting %s has no counts" % setting)
        totals[setting] = total
        distributions[setting] = JointDistribution(table / total)

    low = any(t < min_total for t in totals.values())
    if low:
        logger.warning("Counts file %s: totals %s below %d, entropy estimates are unreliable", path, totals, min_total)
    return CountsData(distributions["Q"], distributions["R"], totals, low)
