from entrobound.gaussian.model import (ApproxBound, CovariancePair, GaussianModel, SpatialParams, TimeParams,
                                       caption_constant, conditional_entropy_sum, covariances,
                                       e3f_cv_approx_spatial, e3f_cv_approx_time, e3f_cv_exact_bound,
                                       figure_marginals, gaussian_conditional_entropy, model_spatial, model_time)
from entrobound.gaussian.coarse import CoarseGrainReport, binned_conditional_entropy, coarse_grained_bound, sigma_min
