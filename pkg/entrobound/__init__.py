"""
entrobound: lower bounds on tripartite (and N-partite) entanglement of formation from
density matrices, measured correlations and Gaussian photon-triplet models.
"""
__version__ = "1.0.0"

from entrobound.errors import EntroboundError, NumericalError, ValidationError
from entrobound.linalg import (DensityMatrix, PureState, SubsystemSignature, collision_entropy,
                               conditional_vn_entropy, eigvals_hermitian, fidelity_pure, group_parties,
                               linear_entropy, partial_trace, permute_parties, tensor_product, vn_entropy)
from entrobound.states import (WernerParams, ghz, ghz_werner, maximally_mixed, rho_insep, state_from_name,
                               w3, w_werner, werner)
from entrobound.witness import (JointDistribution, MeasurementPair, ObservableBasis, WitnessReport,
                                measured_neg_cond_bound, measured_witness_v, measurement_distribution, omega,
                                pauli_basis, pure_e3f, pure_min_bound, quantum_witness_v, shannon_conditional)
from entrobound.npartite import CyclicWitnessReport, conjugate_correlation_defect, cyclic_witness, pure_enf
from entrobound.element_bound import (ElementBoundReport, bound_b_corner, bound_b_full, element_bound_report,
                                      enf_lower_from_b)
