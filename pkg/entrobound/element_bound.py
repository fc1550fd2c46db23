"""
Density-element bounds for states close to the N-qubit GHZ state.

The basis index q is read in binary with the most significant bit on party A,
so for four qubits q = 5 is |0,1,0,1>.
"""
import math
from dataclasses import dataclass

import numpy as np

from entrobound.errors import ValidationError
from entrobound.linalg import as_density

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class ElementBoundReport:
    """
    :ivar b_full: the bound summing every anti-diagonal pair of populations
    :ivar b_corner: the cheaper bound from the four corner elements (never above b_full)
    :ivar enf_lower: lower bound on E_NF in bits, from b_full
    """

    b_full: float
    b_corner: float
    enf_lower: float

    def as_json(self):
        return {"b_full": self.b_full, "b_corner": self.b_corner, "enf_lower": self.enf_lower}


def _qubit_elements(rho):
    rho = as_density(rho)
    if any(d != 2 for d in rho.signature.dims):
        raise ValidationError("element bound: every party must be a qubit, got dims %s" % (rho.signature.dims,))
    return rho.elements


def bound_b_full(rho):
    """
    B = 2|<0..0|ρ|1..1>| - Σ_{q=1}^{2^N-2} sqrt(<q|ρ|q><2^N-1-q|ρ|2^N-1-q>)

    :type rho: :class:`entrobound.linalg.DensityMatrix`

    :rtype: float
    """
    elements = _qubit_elements(rho)
    last = elements.shape[0] - 1
    populations = np.clip(np.diag(elements).real, 0.0, None)
    middle = populations[1:last]
    mirrored = populations[last - 1:0:-1]
    return float(2.0 * abs(elements[0, last]) - np.sum(np.sqrt(middle * mirrored)))


def bound_b_corner(rho):
    """
    2|ρ_{0,2^N-1}| + ρ_{0,0} + ρ_{2^N-1,2^N-1} - 1
    """
    elements = _qubit_elements(rho)
    last = elements.shape[0] - 1
    return float(2.0 * abs(elements[0, last]) + abs(elements[0, 0]) + abs(elements[last, last]) - 1.0)


def enf_lower_from_b(b):
    """
    Converts a bound b on the linear-entropy measure into bits: 0 if b <= 0, else -log2(1 - b²/2).
    At b = √2 the bound diverges and infinity is returned.

    :param b: bound value, at most √2
    :type b: float

    :rtype: float
    """
    if b > SQRT2 + 1e-12:
        raise ValidationError("element bound: b=%.6g exceeds √2, the input state is corrupt" % b)
    if b <= 0.0:
        return 0.0
    residual = 1.0 - min(b, SQRT2) ** 2 / 2.0
    if residual <= 0.0:
        return math.inf
    return float(-np.log2(residual))


def element_bound_report(rho):
    """
    Both element bounds and the E_NF lower bound obtained from the tighter one

    :rtype: :class:`ElementBoundReport`
    """
    b_full = bound_b_full(rho)
    return ElementBoundReport(b_full, bound_b_corner(rho), enf_lower_from_b(b_full))
