"""Concentration bounds for lp-norms of infinitely divisible vectors."""

__version__ = "0.1.0"

from .errors import (ConfigurationError, DomainError, IdconcError,
                     NumericError, RangeError)
from .measures import (CompoundPoisson, CustomDensity, DiscreteJumps,
                       GammaLevy, IDVectorSpec, PoissonAtom,
                       SymmetricExponential, UniformJumps,
                       exp_moment_abscissa, exp_moment_integral,
                       exp_weight_integral, levy_integral, measure_config,
                       measure_from_config, poly_moment, support_radius)
from .numerics import (BoundCertificate, Centering, Provenance, RateFunction,
                       chernoff_bound, constrained_chernoff, find_T,
                       invert_monotone, linear_rate)
from .rates import (MomentSet, ProjectionSpec, bound_cor2,
                    bound_cor2_certificate, bound_cor5, bound_projection,
                    bound_thm1, bound_thm2, bound_thm4, bound_thm5, cor2_rate,
                    rate_cor5, rate_projection, rate_thm1, rate_thm2,
                    rate_thm4, rate_thm5_general, rate_thm5_positive,
                    thm3_report)
from .sampling import (SampleBatch, TailEstimate, collect_moments,
                       empirical_tail, estimate_l, estimate_modified_moments,
                       estimate_moment, estimate_norm_expectation,
                       sample_marginal, sample_vector, tail_from_norms)
from .verification import (Report, verify_bound, verify_covariance_formula,
                           verify_thm3_integrability,
                           verify_variance_identity, verify_young)

__all__ = [name for name in dir() if not name.startswith("_")]
