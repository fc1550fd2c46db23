"""
Dense Hermitian linear algebra and quantum-entropy primitives on multipartite states.

Parties are indexed from 0; reports map them to the labels A, B, C, ...
All entropies are in bits.
"""
import json
import logging
from collections.abc import Iterable
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from entrobound.errors import NumericalError, ValidationError

logger = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
NORM_TOL = 1e-12
PSD_TOL = 1e-10


def party_label(index):
    """
    Report label of a 0-based party index (0 -> "A")

    :rtype: str
    """
    return chr(ord("A") + index)


@dataclass(frozen=True)
class SubsystemSignature:
    """
    **Ordered local dimensions of the parties of a state**

    :ivar dims: local dimensions D_A, D_B, ...
    :vartype dims: tuple(int)

    :ivar trivial: allows one-dimensional parties
    :vartype trivial: bool
    """

    dims: tuple
    trivial: bool = field(default=False, compare=False)

    def __post_init__(self):
        if isinstance(self.dims, (str, bytes)) or not isinstance(self.dims, Iterable):
            raise ValidationError("signature: dims must be a list of integers, got %r" % (self.dims,))
        dims = []
        for d in self.dims:
            if isinstance(d, (bool, np.bool_)) or not isinstance(d, (int, float, np.integer, np.floating)):
                raise ValidationError("signature: dims entry %r is not an integer" % (d,))
            if not float(d).is_integer():
                raise ValidationError("signature: dims entry %r is not an integer" % (d,))
            dims.append(int(d))
        dims = tuple(dims)
        if len(dims) == 0:
            raise ValidationError("signature: at least one party is required")
        lowest = 1 if self.trivial else 2
        if any(d < lowest for d in dims):
            raise ValidationError("signature: every dim must be an integer >= %d, got %s" % (lowest, dims))
        object.__setattr__(self, "dims", dims)

    @property
    def parties(self):
        return len(self.dims)

    @property
    def dim(self):
        return int(np.prod(self.dims))

    @property
    def d_max(self):
        return max(self.dims)

    def labels(self):
        return [party_label(i) for i in range(self.parties)]

    def derived(self, dims):
        """
        Signature over new dims carrying this one's ``trivial`` flag
        """
        return SubsystemSignature(tuple(dims), trivial=self.trivial)

    def __add__(self, other):
        return SubsystemSignature(self.dims + other.dims, trivial=self.trivial or other.trivial)


def _as_signature(signature):
    if isinstance(signature, SubsystemSignature):
        return signature
    return SubsystemSignature(tuple(signature))


def _frozen(array):
    array = np.array(array, dtype=complex)
    array.setflags(write=False)
    return array


class PureState(object):
    """
    **A normalized state vector with a subsystem signature**

    :ivar signature: local dimensions
    :vartype signature: :class:`SubsystemSignature`

    :ivar amplitudes: read-only complex amplitudes, most significant index on party A
    :vartype amplitudes: numpy.ndarray
    """

    def __init__(self, signature, amplitudes, validate=True):
        self.signature = _as_signature(signature)
        self.amplitudes = _frozen(np.ravel(amplitudes))
        if validate:
            self.validate()

    def validate(self):
        if self.amplitudes.shape != (self.signature.dim,):
            raise ValidationError("pure state: %d amplitudes do not match signature %s"
                                  % (self.amplitudes.size, self.signature.dims))
        norm = float(np.vdot(self.amplitudes, self.amplitudes).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValidationError("pure state: squared norm %.15g differs from 1" % norm)

    def projector(self):
        """
        :return: |psi><psi|
        :rtype: :class:`DensityMatrix`
        """
        return DensityMatrix(self.signature, np.outer(self.amplitudes, self.amplitudes.conj()), validate=False)

    def __repr__(self):
        return "PureState(dims=%s)" % (self.signature.dims,)


class DensityMatrix(object):
    """
    **A Hermitian, unit-trace, positive semidefinite matrix with a subsystem signature**

    Invariants are checked on construction unless ``validate`` is False; the
    first violated one is reported.
    """

    def __init__(self, signature, elements, validate=True):
        self.signature = _as_signature(signature)
        self.elements = _frozen(elements)
        if validate:
            self.validate()

    def validate(self):
        dim = self.signature.dim
        if self.elements.shape != (dim, dim):
            raise ValidationError("density matrix: shape %s does not match signature %s"
                                  % (self.elements.shape, self.signature.dims))
        if np.max(np.abs(self.elements - self.elements.conj().T)) > HERMITIAN_TOL:
            raise ValidationError("density matrix: not Hermitian within %g" % HERMITIAN_TOL)
        trace = np.trace(self.elements)
        if abs(trace - 1.0) > TRACE_TOL:
            raise ValidationError("density matrix: trace %.15g differs from 1" % trace.real)
        lowest = eigvals_hermitian(self.elements)[-1]
        if lowest < -PSD_TOL:
            raise ValidationError("density matrix: eigenvalue %.3g below -%g" % (lowest, PSD_TOL))

    def __repr__(self):
        return "DensityMatrix(dims=%s)" % (self.signature.dims,)


def as_density(state):
    """
    Density matrix of a pure state (its projector); density matrices are returned unchanged

    :rtype: :class:`DensityMatrix`
    """
    if isinstance(state, PureState):
        return state.projector()
    if isinstance(state, DensityMatrix):
        return state
    raise ValidationError("expected a PureState or a DensityMatrix, got %s" % type(state).__name__)


def tensor_product(a, b):
    """
    Kronecker product of two states of the same kind; the signatures are concatenated

    :param a: left factor
    :type a: :class:`PureState` or :class:`DensityMatrix`

    :param b: right factor, same kind as ``a``
    :type b: :class:`PureState` or :class:`DensityMatrix`

    :return: a ⊗ b
    """
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(a.signature + b.signature, np.kron(a.amplitudes, b.amplitudes), validate=False)
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(a.signature + b.signature, np.kron(a.elements, b.elements), validate=False)
    raise ValidationError("tensor product: kind mismatch (%s, %s)" % (type(a).__name__, type(b).__name__))


def _check_parties(signature, parties, what):
    parties = [int(p) for p in parties]
    for p in parties:
        if p < 0 or p >= signature.parties:
            raise ValidationError("%s: party index %d out of range for %d parties" % (what, p, signature.parties))
    if len(set(parties)) != len(parties):
        raise ValidationError("%s: repeated party index in %s" % (what, parties))
    return parties


def partial_trace(rho, keep):
    """
    Reduced state on the parties in ``keep`` (returned in their original order)

    :param rho: state to reduce
    :type rho: :class:`DensityMatrix`

    :param keep: party indices to keep
    :type keep: iterable(int)

    :rtype: :class:`DensityMatrix`
    """
    rho = as_density(rho)
    keep = sorted(_check_parties(rho.signature, keep, "partial trace"))
    if not keep:
        raise ValidationError("partial trace: the keep set is empty")
    dims = rho.signature.dims
    n = len(dims)
    if len(keep) == n:
        return rho
    traced = [p for p in range(n) if p not in keep]
    d_keep = int(np.prod([dims[p] for p in keep]))
    d_traced = int(np.prod([dims[p] for p in traced]))
    tensor = rho.elements.reshape(dims + dims)
    order = keep + traced + [n + p for p in keep] + [n + p for p in traced]
    block = tensor.transpose(order).reshape(d_keep, d_traced, d_keep, d_traced)
    reduced = np.einsum("ajbj->ab", block)
    return DensityMatrix(rho.signature.derived(dims[p] for p in keep), reduced, validate=False)


def eigvals_hermitian(m):
    """
    Real eigenvalues of a Hermitian matrix in descending order. The input is
    symmetrized as (M + M†)/2 first.

    :rtype: numpy.ndarray
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError("eigenvalues: matrix must be square, got shape %s" % (m.shape,))
    values = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
    return values[::-1]


def _spectrum(rho):
    values = eigvals_hermitian(as_density(rho).elements)
    if values[-1] < -PSD_TOL:
        raise NumericalError("entropy: eigenvalue %.3g below -%g, state is corrupt" % (values[-1], PSD_TOL))
    return np.clip(values, 0.0, None)


def _entropy_of(probabilities):
    p = probabilities[probabilities > 0.0]
    return float(-np.sum(p * np.log2(p)))


def vn_entropy(rho):
    """
    Von Neumann entropy S = -Σ λ log2 λ, with 0·log 0 = 0

    :type rho: :class:`DensityMatrix` or :class:`PureState`

    :rtype: float
    """
    if isinstance(rho, PureState):
        return 0.0
    return max(_entropy_of(_spectrum(rho)), 0.0)


def subsystem_entropy(rho, parties):
    """
    Entropy of the reduced state on ``parties``; the empty set has entropy 0
    """
    parties = list(parties)
    if not parties:
        return 0.0
    return vn_entropy(partial_trace(rho, parties))


def _as_party_list(parties):
    if isinstance(parties, (int, np.integer)):
        return [int(parties)]
    return [int(p) for p in parties]


def conditional_vn_entropy(rho, target, rest):
    """
    Conditional entropy S(target|rest) = S(target ∪ rest) - S(rest)

    :param rho: tripartite (or larger) state
    :type rho: :class:`DensityMatrix` or :class:`PureState`

    :param target: party index (or indices) being conditioned
    :param rest: conditioning party indices

    :rtype: float
    """
    rho = as_density(rho)
    target = _as_party_list(target)
    rest = _as_party_list(rest)
    if set(target) & set(rest):
        raise ValidationError("conditional entropy: target %s overlaps rest %s" % (target, rest))
    _check_parties(rho.signature, target + rest, "conditional entropy")
    return subsystem_entropy(rho, target + rest) - subsystem_entropy(rho, rest)


def purity(rho):
    rho = as_density(rho)
    return float(np.sum(np.abs(rho.elements) ** 2))


def linear_entropy(rho):
    """
    S_L = 2(1 - Tr ρ²)
    """
    return 2.0 * (1.0 - purity(rho))


def collision_entropy(rho):
    """
    S_C = -log2 Tr ρ²
    """
    return float(-np.log2(purity(rho)))


def permute_parties(state, perm):
    """
    Reorders the parties: party ``i`` of the result is party ``perm[i]`` of the input

    :param state: state to relabel
    :type state: :class:`PureState` or :class:`DensityMatrix`

    :param perm: permutation of range(parties)
    :type perm: list(int)
    """
    dims = state.signature.dims
    n = len(dims)
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(n)):
        raise ValidationError("permute parties: %s is not a permutation of %d parties" % (perm, n))
    new_dims = [dims[p] for p in perm]
    if isinstance(state, PureState):
        amplitudes = state.amplitudes.reshape(dims).transpose(perm).reshape(-1)
        return PureState(state.signature.derived(new_dims), amplitudes, validate=False)
    elements = state.elements.reshape(dims + dims).transpose(perm + [n + p for p in perm])
    dim = state.signature.dim
    return DensityMatrix(state.signature.derived(new_dims), elements.reshape(dim, dim), validate=False)


def group_parties(state, sizes):
    """
    Merges consecutive parties: ``sizes=[2, 2, 2]`` reads six parties as three.
    Amplitudes are unchanged; only the signature is regrouped.
    """
    dims = state.signature.dims
    sizes = [int(s) for s in sizes]
    if any(s < 1 for s in sizes) or sum(sizes) != len(dims):
        raise ValidationError("group parties: sizes %s do not cover %d parties" % (sizes, len(dims)))
    grouped = []
    start = 0
    for size in sizes:
        grouped.append(int(np.prod(dims[start:start + size])))
        start += size
    if isinstance(state, PureState):
        return PureState(state.signature.derived(grouped), state.amplitudes, validate=False)
    return DensityMatrix(state.signature.derived(grouped), state.elements, validate=False)


def fidelity_pure(state, target):
    """
    Fidelity <target|ρ|target> of a state with a pure target

    :param state: state under test
    :type state: :class:`DensityMatrix` or :class:`PureState`

    :param target: pure target state
    :type target: :class:`PureState`

    :rtype: float
    """
    rho = as_density(state)
    if rho.signature.dim != target.signature.dim:
        raise ValidationError("fidelity: dimension %d does not match target dimension %d"
                              % (rho.signature.dim, target.signature.dim))
    value = np.vdot(target.amplitudes, rho.elements @ target.amplitudes).real
    return float(min(max(value, 0.0), 1.0))


def partial_transpose(rho, party):
    """
    Partial transpose of ``rho`` on one party

    :rtype: numpy.ndarray
    """
    rho = as_density(rho)
    dims = rho.signature.dims
    n = len(dims)
    party = _check_parties(rho.signature, [party], "partial transpose")[0]
    axes = list(range(2 * n))
    axes[party], axes[n + party] = axes[n + party], axes[party]
    dim = rho.signature.dim
    return rho.elements.reshape(dims + dims).transpose(axes).reshape(dim, dim)


def is_ppt(rho):
    """
    True when every single-party partial transpose is positive semidefinite (to -1e-10)
    """
    rho = as_density(rho)
    for party in range(rho.signature.parties):
        if eigvals_hermitian(partial_transpose(rho, party))[-1] < -PSD_TOL:
            return False
    return True


def bipartitions(parties):
    """
    Every bipartite split of ``range(parties)``, each listed once as the side containing party 0

    :rtype: list(tuple(int))
    """
    others = list(range(1, parties))
    splits = []
    for size in range(0, parties - 1):
        for chosen in combinations(others, size):
            splits.append((0,) + chosen)
    return splits


def density_to_dict(rho):
    rho = as_density(rho)
    return {"dims": list(rho.signature.dims),
            "re": rho.elements.real.tolist(),
            "im": rho.elements.imag.tolist()}


def density_from_dict(data):
    """
    Builds a density matrix from the JSON layout {"dims": [...], "re": [[...]], "im": [[...]]}

    :rtype: :class:`DensityMatrix`
    """
    if not isinstance(data, dict):
        raise ValidationError("density json: top level must be an object")
    for key in ("dims", "re"):
        if key not in data:
            raise ValidationError("density json: missing field '%s'" % key)
    try:
        signature = SubsystemSignature(data["dims"])
    except ValidationError as e:
        raise ValidationError("density json: field 'dims': %s" % e)
    try:
        re = np.array(data["re"], dtype=float)
        im = np.array(data.get("im", np.zeros_like(re)), dtype=float)
    except (TypeError, ValueError) as e:
        raise ValidationError("density json: 're'/'im' must be numeric matrices (%s)" % e)
    if re.ndim != 2 or re.shape != im.shape:
        raise ValidationError("density json: 're' and 'im' must be matrices of equal shape, got %s and %s"
                              % (re.shape, im.shape))
    if not (np.all(np.isfinite(re)) and np.all(np.isfinite(im))):
        raise ValidationError("density json: 're'/'im' hold non-finite entries")
    return DensityMatrix(signature, re + 1j * im)


def read_density_json(path):
    """
    Reads and validates a density matrix file

    :param path: path to the JSON file
    :type path: str

    :rtype: :class:`DensityMatrix`
    """
    with open(path, "r", encoding="utf-8") as fp:
        try:
            data = json.load(fp)
        except json.JSONDecodeError as e:
            raise ValidationError("density json: %s: line %d column %d: %s" % (path, e.lineno, e.colno, e.msg))
        except UnicodeDecodeError as e:
            raise ValidationError("density json: %s: not valid UTF-8 at byte %d" % (path, e.start))
    return density_from_dict(data)


def write_density_json(rho, path):
    with open(path, "w") as fp:
        fp.write(json.dumps(density_to_dict(rho), sort_keys=True, indent=4))
