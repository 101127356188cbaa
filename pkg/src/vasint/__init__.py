"""Vasilyev-type integrals and very-well-poised hypergeometric identities."""
from .decomp import (PartialFractionTable, ZetaDecomposition, check_integrality,
                     partial_fraction_decompose, specialized_summand, zeta_decompose)
from .errors import (ConditionViolated, DimensionTooLarge, InvalidOrder, InvalidParameters,
                     LogTermSurvives, MaxTermsExceeded, NonPositiveArgument, NotConvergent,
                     ParityViolation, ReconstructionMismatch, VasintError, ZeroDenominator)
from .harness import (VerificationReport, check_andrews, check_prop2, check_vasilyev,
                      check_whipple, check_zudilin, map_h_to_jm)
from .hyper import (SeriesClass, SeriesSpec, build_vasilyev_series, build_zudilin_rhs_series,
                    classify_series, eval_pfq, eval_pfq_exact_terminating)
from .integral import (QuadratureGrid, check_jm_conditions, eval_jm_quadrature,
                       eval_jm_recursive, eval_Q)
from .multisum import (DomainInput, MultisumSpec, check_lemma4, check_multizeta_domain,
                       check_prop2_conditions, eval_andrews_rhs_exact, eval_feven_rhs,
                       eval_fodd_rhs, eval_multisum, eval_zlobin_multisum)
from .numeric import (GammaQuotient, PrecisionConfig, gamma, gamma_ratio, lcm_upto,
                      pochhammer, zeta_int)
from .params import JmParams, ParameterVectorH
from .verdict import Condition, ConvergenceVerdict

__version__ = "0.1.0"
