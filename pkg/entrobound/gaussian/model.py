"""
Triple-Gaussian model of photon triplets from third-order down-conversion.

The two-photon-amplitude analogue for three photons factors into Gaussians along
the rotated coordinates

    u = (2, -1, -1)/√6,  v = (0, 1, -1)/√2,  w = (1, 1, 1)/√3

with ψ ∝ exp(-α_u k_u² - α_v k_v² - α_w k_w²) in the conjugate variables (k or ω).
A pure Gaussian has var(k_m) = 1/(4 α_m) and var(x_m) = α_m along each axis m.
Units are SI throughout.
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from entrobound.errors import NumericalError, ValidationError

logger = logging.getLogger(__name__)

LOG2_2PI = float(np.log2(2.0 * np.pi))
LOG2_E = float(np.log2(np.e))

ROTATION = np.array([
    [2.0 / np.sqrt(6.0), -1.0 / np.sqrt(6.0), -1.0 / np.sqrt(6.0)],
    [0.0, 1.0 / np.sqrt(2.0), -1.0 / np.sqrt(2.0)],
    [1.0 / np.sqrt(3.0), 1.0 / np.sqrt(3.0), 1.0 / np.sqrt(3.0)],
])
ROTATION.setflags(write=False)


def caption_constant():
    """
    Asymptotic gap between the bare ratio-of-widths bound and the exact bound, ½ log2(4/3)
    """
    return 0.5 * float(np.log2(4.0 / 3.0))


def _positive(name, value):
    value = float(value)
    if not value > 0.0 or not np.isfinite(value):
        raise ValidationError("%s must be strictly positive and finite, got %r" % (name, value))
    return value


@dataclass(frozen=True)
class SpatialParams:
    """
    :ivar L_z: crystal length (m)
    :ivar lambda_p: pump wavelength (m)
    :ivar n_p: refractive index at the pump wavelength
    :ivar sigma_p: pump width, one quarter of the 1/e² beam diameter (m)
    """

    L_z: float = 10e-3
    lambda_p: float = 325e-9
    n_p: float = 2.247
    sigma_p: float = 1.0e-3

    def __post_init__(self):
        for name in ("L_z", "lambda_p", "n_p", "sigma_p"):
            object.__setattr__(self, name, _positive(name, getattr(self, name)))

    @property
    def a(self):
        return 3.0 * self.L_z * self.lambda_p / (8.0 * np.pi * self.n_p)


@dataclass(frozen=True)
class TimeParams:
    """
    :ivar L_z: crystal length (m)
    :ivar kappa: group velocity dispersion at a third of the pump frequency (s²/m)
    :ivar sigma_wp: pump bandwidth (rad/s)
    """

    L_z: float = 10e-3
    kappa: float = 1.01e-25
    sigma_wp: float = 1.94e9

    def __post_init__(self):
        for name in ("L_z", "kappa", "sigma_wp"):
            object.__setattr__(self, name, _positive(name, getattr(self, name)))

    @property
    def b(self):
        return self.L_z * self.kappa / 4.0


@dataclass(frozen=True)
class GaussianModel:
    """
    **Exponent coefficients of the triple-Gaussian wavefunction**

    :ivar alpha_u: coefficient along u
    :ivar alpha_v: coefficient along v
    :ivar alpha_w: coefficient along w
    :ivar kind: "spatial" (x, k) or "time" (t, ω)
    """

    alpha_u: float
    alpha_v: float
    alpha_w: float
    kind: str = "spatial"

    def __post_init__(self):
        for name in ("alpha_u", "alpha_v", "alpha_w"):
            object.__setattr__(self, name, _positive(name, getattr(self, name)))
        if self.kind not in ("spatial", "time"):
            raise ValidationError("gaussian model: kind must be 'spatial' or 'time', got %r" % self.kind)

    @property
    def alphas(self):
        return np.array([self.alpha_u, self.alpha_v, self.alpha_w])

    @property
    def rotation(self):
        return ROTATION

    @property
    def symmetric(self):
        return np.isclose(self.alpha_u, self.alpha_v, rtol=1e-12, atol=0.0)


@dataclass(frozen=True)
class CovariancePair:
    """
    :ivar cov_conjugate: covariance of (k_1, k_2, k_3) or (ω_1, ω_2, ω_3)
    :ivar cov_direct: covariance of (x_1, x_2, x_3) or (t_1, t_2, t_3)
    """

    cov_conjugate: np.ndarray
    cov_direct: np.ndarray


def model_spatial(params):
    """
    α_u = α_v = 8a/9 and α_w = 3σ_p² + 32a/9, with a = 3 L_z λ_p / (8π n_p)

    :type params: :class:`SpatialParams`

    :rtype: :class:`GaussianModel`
    """
    a = params.a
    return GaussianModel(8.0 * a / 9.0, 8.0 * a / 9.0, 3.0 * params.sigma_p ** 2 + 32.0 * a / 9.0, "spatial")


def model_time(params):
    """
    α_u = α_v = 8b/9 and α_w = 3/(4σ_ωp²) + 8b/9, with b = L_z κ / 4

    :type params: :class:`TimeParams`

    :rtype: :class:`GaussianModel`
    """
    b = params.b
    return GaussianModel(8.0 * b / 9.0, 8.0 * b / 9.0, 3.0 / (4.0 * params.sigma_wp ** 2) + 8.0 * b / 9.0, "time")


def covariances(model):
    """
    Covariances in party coordinates: diag(1/(4α)) and diag(α) rotated by the fixed orthogonal matrix

    :type model: :class:`GaussianModel`

    :rtype: :class:`CovariancePair`
    """
    alphas = model.alphas
    conjugate = ROTATION.T @ np.diag(1.0 / (4.0 * alphas)) @ ROTATION
    direct = ROTATION.T @ np.diag(alphas) @ ROTATION
    return CovariancePair((conjugate + conjugate.T) / 2.0, (direct + direct.T) / 2.0)


def conditional_variance(cov, target, given):
    """
    Schur complement σ²_t - Σ_tg Σ_gg⁻¹ Σ_gt

    :rtype: float
    """
    cov = np.asarray(cov, dtype=float)
    given = [int(g) for g in given]
    if int(target) in given:
        raise ValidationError("conditional variance: target %d is also conditioned on" % target)
    variance = cov[target, target]
    if not given:
        return float(variance)
    block = cov[np.ix_(given, given)]
    cross = cov[target, given]
    try:
        factor = linalg.cho_factor(block)
    except linalg.LinAlgError:
        raise NumericalError("conditional variance: conditioning block %s is singular" % given)
    schur = variance - cross @ linalg.cho_solve(factor, cross)
    if not schur > 0.0:
        raise NumericalError("conditional variance: non-positive Schur complement %.3g" % schur)
    return float(schur)


def gaussian_conditional_entropy(cov, target, given):
    """
    Differential entropy h(target|given) = ½ log2(2πe σ²_c) of a jointly Gaussian vector

    :param cov: symmetric positive definite covariance
    :type cov: numpy.ndarray

    :param target: index of the conditioned variable
    :type target: int

    :param given: indices of the conditioning variables
    :type given: list(int)

    :rtype: float
    """
    variance = conditional_variance(cov, target, given)
    return 0.5 * float(np.log2(2.0 * np.pi * np.e * variance))


def conditional_entropy_sum(model, target=0):
    """
    h(direct_t|direct_rest) + h(conjugate_t|conjugate_rest)
    """
    pair = covariances(model)
    given = [p for p in range(3) if p != target]
    return (gaussian_conditional_entropy(pair.cov_direct, target, given)
            + gaussian_conditional_entropy(pair.cov_conjugate, target, given))


def e3f_cv_exact_bound(model):
    """
    E3F >= log2(2π) - h(x_A|x_B,x_C) - h(k_A|k_B,k_C) for the pure, party-symmetric model

    :type model: :class:`GaussianModel`

    :rtype: float
    """
    if not model.symmetric:
        raise ValidationError("exact bound: the model is not symmetric between parties (α_u != α_v)")
    return LOG2_2PI - conditional_entropy_sum(model, 0)


@dataclass(frozen=True)
class ApproxBound:
    """
    :ivar bare: the ratio-of-widths bound
    :ivar caption: the bare bound plus the constant ½ log2(4/3)
    """

    bare: float
    caption: float


def _approx(bare):
    return ApproxBound(float(bare), float(bare) + caption_constant())


def e3f_cv_approx_spatial(params):
    """
    E3F >= -log2((e/2) σ(x_A - x_B)/σ(x_A)) with σ(x_A - x_B)² = 16a/9, σ(x_A)² = σ_p² + 16a/9

    :type params: :class:`SpatialParams`

    :rtype: :class:`ApproxBound`
    """
    a = params.a
    difference = np.sqrt(16.0 * a / 9.0)
    marginal = np.sqrt(params.sigma_p ** 2 + 16.0 * a / 9.0)
    return _approx(-np.log2(np.e / 2.0 * difference / marginal))


def e3f_cv_approx_time(params):
    """
    E3F >= -log2(e σ(t_A - t_B) σ(ω_A + ω_B + ω_C))

    :type params: :class:`TimeParams`

    :rtype: :class:`ApproxBound`
    """
    b = params.b
    difference = np.sqrt(16.0 * b / 9.0)
    frequency_sum = 1.0 / np.sqrt(4.0 * (8.0 * b / 27.0 + 1.0 / (4.0 * params.sigma_wp ** 2)))
    return _approx(-np.log2(np.e * difference * frequency_sum))


def _combination_variance(axis_variances, coefficients):
    """
    Variance of Σ c_i z_i for party variables z whose covariance is diagonal along u, v, w.
    Summed along the axes, so no large entries cancel.
    """
    projection = ROTATION @ np.asarray(coefficients, dtype=float)
    return float(np.sum(axis_variances * projection ** 2))


def figure_marginals(model):
    """
    Widths quoted alongside the bound curves: σ(x_A), σ(x_A - x_B) on the direct side and
    σ(k_A + k_B + k_C) on the conjugate side (t and ω for the time model)

    :rtype: dict(str, float)
    """
    alphas = model.alphas
    conjugate = 1.0 / (4.0 * alphas)
    return {
        "sigma_direct_A": float(np.sqrt(_combination_variance(alphas, [1.0, 0.0, 0.0]))),
        "sigma_direct_A_minus_B": float(np.sqrt(_combination_variance(alphas, [1.0, -1.0, 0.0]))),
        "sigma_conjugate_sum": float(np.sqrt(_combination_variance(conjugate, [1.0, 1.0, 1.0]))),
    }
