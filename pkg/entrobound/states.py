"""
Constructors for the named states: GHZ, W, maximally mixed, Werner mixtures and
the biseparably derived three-qubit mixture.
"""
import re
from dataclasses import dataclass

import numpy as np

from entrobound.errors import ValidationError
from entrobound.linalg import DensityMatrix, PureState, SubsystemSignature, tensor_product


@dataclass(frozen=True)
class WernerParams:
    """
    :ivar p: weight of the pure state in the mixture, 0 <= p <= 1
    """

    p: float

    def __post_init__(self):
        p = float(self.p)
        if not 0.0 <= p <= 1.0:
            raise ValidationError("werner: mixing fraction p=%r outside [0, 1]" % self.p)
        object.__setattr__(self, "p", p)


def basis_ket(dims, levels):
    """
    Computational-basis product ket |levels[0], levels[1], ...>

    :rtype: :class:`PureState`
    """
    dims = list(dims)
    amplitudes = np.zeros(int(np.prod(dims)), dtype=complex)
    amplitudes[np.ravel_multi_index(tuple(levels), dims)] = 1.0
    return PureState(dims, amplitudes)


def ghz(n=3, d=2, phases=None):
    """
    GHZ state (1/√d) Σ_k e^{iφ_k} |k⟩^{⊗n}, with φ_0 = 0

    :param n: number of parties (>= 2)
    :type n: int

    :param d: local dimension (>= 2)
    :type d: int

    :param phases: phases of the terms k = 1..d-1, all zero by default
    :type phases: list(float)

    :rtype: :class:`PureState`
    """
    if n < 2 or d < 2:
        raise ValidationError("ghz: need n >= 2 and d >= 2, got n=%d d=%d" % (n, d))
    if phases is None:
        phases = [0.0] * (d - 1)
    if len(phases) != d - 1:
        raise ValidationError("ghz: expected %d phases for d=%d, got %d" % (d - 1, d, len(phases)))
    dims = [d] * n
    amplitudes = np.zeros(d ** n, dtype=complex)
    coefficients = np.exp(1j * np.concatenate(([0.0], np.asarray(phases, dtype=float))))
    for k in range(d):
        amplitudes[np.ravel_multi_index((k,) * n, dims)] = coefficients[k] / np.sqrt(d)
    return PureState(dims, amplitudes)


def w3():
    """
    |W3> = (|001> + |010> + |100>)/√3

    :rtype: :class:`PureState`
    """
    amplitudes = np.zeros(8, dtype=complex)
    amplitudes[[1, 2, 4]] = 1.0 / np.sqrt(3.0)
    return PureState([2, 2, 2], amplitudes)


def maximally_mixed(signature):
    """
    I/dim for the given local dimensions

    :rtype: :class:`DensityMatrix`
    """
    if not isinstance(signature, SubsystemSignature):
        signature = SubsystemSignature(tuple(signature))
    dim = signature.dim
    return DensityMatrix(signature, np.eye(dim, dtype=complex) / dim)


def werner(pure, p):
    """
    p |ψ⟩⟨ψ| + (1 - p) ρ_MM

    :param pure: target pure state
    :type pure: :class:`PureState`

    :param p: mixing fraction
    :type p: :class:`WernerParams` or float

    :rtype: :class:`DensityMatrix`
    """
    if not isinstance(p, WernerParams):
        p = WernerParams(p)
    mixed = maximally_mixed(pure.signature)
    elements = p.p * pure.projector().elements + (1.0 - p.p) * mixed.elements
    return DensityMatrix(pure.signature, elements)


def ghz_werner(p):
    return werner(ghz(3, 2), p)


def w_werner(p):
    return werner(w3(), p)


def rho_insep():
    """
    Equal mixture of a Bell pair on each two-party subset with |0> on the remaining party:
    (Φ+_AB ⊗ |0_C⟩⟨0_C| + Φ+_AC ⊗ |0_B⟩⟨0_B| + Φ+_BC ⊗ |0_A⟩⟨0_A|)/3, parties ordered A, B, C.
    Every term is biseparable, so the mixture carries no genuine tripartite entanglement.

    :rtype: :class:`DensityMatrix`
    """
    bell = ghz(2, 2).amplitudes.reshape(2, 2)
    zero = np.array([1.0, 0.0])
    terms = [
        np.einsum("ab,c->abc", bell, zero),
        np.einsum("ac,b->abc", bell, zero),
        np.einsum("bc,a->abc", bell, zero),
    ]
    elements = sum(np.outer(t.ravel(), t.ravel().conj()) for t in terms) / 3.0
    return DensityMatrix([2, 2, 2], elements)


_NAME = re.compile(r"^\s*([a-z]+[0-9]*)\s*(?:\(([^)]*)\))?\s*$")


def state_from_name(name, n=None):
    """
    Parses a state name: "ghz3", "ghz(n,d)", "ghz", "w3", "mm", "mm(n)", "insep", "gw(p)", "ww(p)".
    "ghz" and "mm" without arguments use ``n`` parties (3 by default).

    :param name: state name
    :type name: str

    :param n: party count for the argument-less forms
    :type n: int

    :rtype: :class:`PureState` or :class:`DensityMatrix`
    """
    match = _NAME.match(name.lower())
    if match is None:
        raise ValidationError("state name: cannot parse '%s'" % name)
    key, raw = match.group(1), match.group(2)
    try:
        args = [float(a) for a in raw.split(",")] if raw else []
    except ValueError:
        raise ValidationError("state name: bad arguments in '%s'" % name)
    parties = n if n is not None else 3

    if key == "ghz3" and not args:
        return ghz(3, 2)
    if key == "ghz":
        if len(args) == 0:
            return ghz(parties, 2)
        if len(args) == 2:
            return ghz(int(args[0]), int(args[1]))
    if key == "w3" and not args:
        return w3()
    if key == "mm":
        if len(args) == 0:
            return maximally_mixed([2] * parties)
        if len(args) == 1:
            return maximally_mixed([2] * int(args[0]))
    if key == "insep" and not args:
        return rho_insep()
    if key == "gw" and len(args) == 1:
        return ghz_werner(args[0])
    if key == "ww" and len(args) == 1:
        return w_werner(args[0])
    raise ValidationError("state name: unknown state '%s'" % name)


def product(*states):
    """
    Tensor product of several states of the same kind
    """
    result = states[0]
    for s in states[1:]:
        result = tensor_product(result, s)
    return result
