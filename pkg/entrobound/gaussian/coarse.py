"""
Coarse-grained (binned) entropic bound for the triple-Gaussian model.

Binned conditional entropies H(X_A|X_B,X_C) are estimated by Monte-Carlo: samples
are drawn from the trivariate Gaussian, and for every sample the exact masses of
its three- and two-dimensional bins are integrated (Gauss-Legendre on the
conditioning variables, error-function differences on the last one). The
per-sample value -log2 P(bin_A | bin_B, bin_C) averages to the binned entropy.
Bins are anchored at 0, so doubling a width always gives a nested grid.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg
from scipy.special import ndtr

from entrobound.errors import NumericalError, ValidationError
from entrobound.gaussian.model import covariances

logger = logging.getLogger(__name__)

CHUNK = 8192
MIN_OCCUPIED_BINS = 3
TINY = 1e-300


@dataclass(frozen=True)
class BinnedEntropy:
    """
    :ivar value: estimated binned conditional entropy (bits)
    :ivar stderr: Monte-Carlo standard error (bits)
    """

    value: float
    stderr: float


@dataclass(frozen=True)
class CoarseGrainReport:
    """
    :ivar bound: lower bound on -S(A|BC), log2(2π/(Δx Δk)) - H_X - H_K
    :ivar stderr: Monte-Carlo standard error of the bound
    :ivar h_direct: binned H(X_A|X_B,X_C)
    :ivar h_conjugate: binned H(K_A|K_B,K_C)
    """

    bound: float
    stderr: float
    h_direct: BinnedEntropy
    h_conjugate: BinnedEntropy
    dx: float
    dk: float
    samples: int
    seed: int

    def as_json(self):
        return {"bound": self.bound, "stderr": self.stderr, "h_direct": self.h_direct.value,
                "h_conjugate": self.h_conjugate.value, "dx": self.dx, "dk": self.dk,
                "samples": self.samples, "seed": self.seed}


def _interval_mass(lo, hi):
    # mass of a standard normal on [lo, hi], taken from the nearer tail
    upper = ndtr(-lo) - ndtr(-hi)
    lower = ndtr(hi) - ndtr(lo)
    return np.where(lo > 0.0, upper, lower)


class _BinIntegrator(object):
    """
    Exact bin masses of a trivariate Gaussian ordered as (target, g1, g2)
    """

    def __init__(self, cov, width, nodes):
        self.width = width
        self.sd1 = math.sqrt(cov[1, 1])
        # g2 | g1
        self.k21 = cov[2, 1] / cov[1, 1]
        self.sd21 = math.sqrt(cov[2, 2] - cov[2, 1] ** 2 / cov[1, 1])
        # target | g1, g2
        block = cov[1:, 1:]
        self.k0 = linalg.solve(block, cov[1:, 0], assume_a="pos")
        schur = cov[0, 0] - cov[0, 1:] @ self.k0
        if not schur > 0.0 or not self.sd21 > 0.0:
            raise NumericalError("coarse grain: degenerate covariance, conditional variance %.3g" % schur)
        self.sd0 = math.sqrt(schur)
        self.x, self.w = np.polynomial.legendre.leggauss(nodes)

    def _nodes(self, index):
        lo = index * self.width
        half = self.width / 2.0
        points = (lo + half)[:, None] + half * self.x[None, :]
        return points, half * self.w[None, :]

    def masses(self, bins):
        """
        (P(target bin, g1 bin, g2 bin), P(g1 bin, g2 bin)) for an array of bin indices
        """
        i0, i1, i2 = bins[:, 0].astype(float), bins[:, 1].astype(float), bins[:, 2].astype(float)
        g1, w1 = self._nodes(i1)
        density1 = np.exp(-0.5 * (g1 / self.sd1) ** 2) / (self.sd1 * math.sqrt(2.0 * math.pi))

        mean21 = self.k21 * g1
        lo2 = (i2 * self.width)[:, None]
        pair = np.sum(w1 * density1 * _interval_mass((lo2 - mean21) / self.sd21,
                                                     (lo2 + self.width - mean21) / self.sd21), axis=1)

        g2, w2 = self._nodes(i2)
        mean2 = mean21[:, :, None]
        density2 = np.exp(-0.5 * ((g2[:, None, :] - mean2) / self.sd21) ** 2) / (self.sd21 * math.sqrt(2.0 * math.pi))
        mean0 = self.k0[0] * g1[:, :, None] + self.k0[1] * g2[:, None, :]
        lo0 = (i0 * self.width)[:, None, None]
        target = _interval_mass((lo0 - mean0) / self.sd0, (lo0 + self.width - mean0) / self.sd0)
        weights = w1[:, :, None] * w2[:, None, :]
        triple = np.sum(weights * density1[:, :, None] * density2 * target, axis=(1, 2))
        return triple, pair


def binned_conditional_entropy(cov, width, target=0, samples=1_000_000, seed=12345, nodes=10):
    """
    Monte-Carlo estimate of H(V_t | V_rest) for a zero-mean trivariate Gaussian binned with ``width``

    :param cov: 3x3 covariance in party coordinates
    :type cov: numpy.ndarray

    :param width: bin width, identical for the three variables
    :type width: float

    :param samples: number of Monte-Carlo samples
    :type samples: int

    :param seed: seed of the sample generator
    :type seed: int

    :param nodes: Gauss-Legendre nodes per conditioning variable and bin
    :type nodes: int

    :rtype: :class:`BinnedEntropy`
    """
    if not width > 0.0:
        raise ValidationError("coarse grain: bin width must be positive, got %r" % width)
    if samples < 2:
        raise ValidationError("coarse grain: at least 2 samples are required")
    order = [target] + [p for p in range(3) if p != target]
    cov = np.asarray(cov, dtype=float)[np.ix_(order, order)]
    try:
        chol = linalg.cholesky(cov, lower=True)
    except linalg.LinAlgError:
        raise NumericalError("coarse grain: covariance is not positive definite")

    rng = np.random.default_rng(seed)
    points = rng.standard_normal((samples, 3)) @ chol.T
    bins = np.floor(points / width).astype(np.int64)
    if np.unique(bins[:, 0]).size < MIN_OCCUPIED_BINS:
        raise ValidationError("coarse grain: bin width %.3g leaves fewer than %d occupied bins, histogram is degenerate"
                              % (width, MIN_OCCUPIED_BINS))

    unique, inverse = np.unique(bins, axis=0, return_inverse=True)
    inverse = np.ravel(inverse)
    integrator = _BinIntegrator(cov, width, nodes)
    surprisal = np.empty(unique.shape[0])
    for start in range(0, unique.shape[0], CHUNK):
        triple, pair = integrator.masses(unique[start:start + CHUNK])
        surprisal[start:start + CHUNK] = np.log2(np.maximum(pair, TINY)) - np.log2(np.maximum(triple, TINY))

    per_sample = np.maximum(surprisal[inverse], 0.0)
    # chunk sums are combined exactly so the result does not depend on chunking
    total = math.fsum(np.sum(per_sample[s:s + CHUNK]) for s in range(0, samples, CHUNK))
    mean = total / samples
    stderr = float(np.std(per_sample, ddof=1) / math.sqrt(samples))
    return BinnedEntropy(float(mean), stderr)


def sigma_min(cov):
    """
    Smallest principal standard deviation of a covariance
    """
    return float(math.sqrt(np.linalg.eigvalsh(np.asarray(cov, dtype=float))[0]))


def coarse_grained_bound(model, dx, dk, samples=1_000_000, seed=12345, nodes=10, target=0):
    """
    Lower bound on -S(A|BC) from binned direct and conjugate statistics:
    log2(2π/(Δx Δk)) - H(X_A|X_B,X_C) - H(K_A|K_B,K_C)

    :param model: triple-Gaussian model
    :type model: :class:`entrobound.gaussian.model.GaussianModel`

    :param dx: bin width of the direct variables (x or t)
    :type dx: float

    :param dk: bin width of the conjugate variables (k or ω)
    :type dk: float

    :rtype: :class:`CoarseGrainReport`
    """
    if not dx > 0.0 or not dk > 0.0:
        raise ValidationError("coarse grain: bin widths must be positive, got dx=%r dk=%r" % (dx, dk))
    pair = covariances(model)
    h_direct = binned_conditional_entropy(pair.cov_direct, dx, target, samples, seed, nodes)
    h_conjugate = binned_conditional_entropy(pair.cov_conjugate, dk, target, samples, seed + 1, nodes)
    bound = float(np.log2(2.0 * np.pi / (dx * dk)) - h_direct.value - h_conjugate.value)
    stderr = math.hypot(h_direct.stderr, h_conjugate.stderr)
    logger.debug("Coarse-grained bound %.6f ± %.6f bits (dx=%g, dk=%g, %d samples)", bound, stderr, dx, dk, samples)
    return CoarseGrainReport(bound, stderr, h_direct, h_conjugate, float(dx), float(dk), int(samples), int(seed))
