"""Greedy signed-harmonic approximation of real numbers.

Approximates a target tau by partial sums sigma_n = sum_{m<=n} s_m / m
where each sign s_m greedily moves the sum toward tau, together with
the Thue-Morse machinery governing the resulting sign patterns, a
decision procedure for the exceptional sets X_k of eventually periodic
sign tails, and certified high-precision evaluation of the associated
constants U(k, m) and tau0.
"""

from .ball import RealBall, pi_ball
from .classifier import (ClassificationResult, ClassificationStep,
                         SeparationGap, classify, first_block_index)
from .constants import (UConstantSpec, named_oracle, tau0, u_closed_form,
                        u_series)
from .engine import (AdversarialResult, GreedyState, RecordEntry, RunSummary,
                     ScaledDeviation, construct_adversarial,
                     corollary_witnesses, exact_hit_search, greedy_signs,
                     nearest_cluster, nh_sequence, record_tracker, run,
                     scaled_deviations, step)
from .errors import (BudgetError, DomainError, InconsistencyError,
                     PrecisionError, ResourceLimitError)
from .kernels import (G, KernelOrder, c_scale, g, g_shifted, g_tail_sum,
                      tm_partial_sum)
from .targets import (ExactRational, NamedU, SqrtCombo, TargetNumber, Tau0,
                      parse_rational_literal, parse_target)
from .thue_morse import (BlockDecomposition, block, epsilon, f_periodic,
                         parse_blocks)
from .weights import WeightVector, eps_iterated, fabius_profile, weight_vector

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # ball
    "RealBall", "pi_ball",
    # thue_morse
    "epsilon", "f_periodic", "block", "BlockDecomposition", "parse_blocks",
    # kernels
    "KernelOrder", "c_scale", "g", "g_shifted", "G", "tm_partial_sum",
    "g_tail_sum",
    # weights
    "WeightVector", "weight_vector", "eps_iterated", "fabius_profile",
    # targets
    "TargetNumber", "ExactRational", "NamedU", "Tau0", "SqrtCombo",
    "parse_target", "parse_rational_literal",
    # constants
    "UConstantSpec", "u_closed_form", "u_series", "tau0", "named_oracle",
    # engine
    "GreedyState", "step", "run", "RunSummary", "greedy_signs",
    "exact_hit_search", "RecordEntry", "record_tracker", "ScaledDeviation",
    "scaled_deviations", "nearest_cluster", "corollary_witnesses",
    "nh_sequence", "AdversarialResult", "construct_adversarial",
    # classifier
    "classify", "first_block_index", "ClassificationResult",
    "ClassificationStep", "SeparationGap",
    # errors
    "DomainError", "ResourceLimitError", "PrecisionError", "BudgetError",
    "InconsistencyError",
]
