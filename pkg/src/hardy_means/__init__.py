"""Subset-composed power means, Hardy-constant experiments, classification.

The package evaluates the two-level means M_{k,s,q} (order-s power mean of
the order-q power means of all k-element sub-tuples), measures truncated
Hardy ratios sum_n M(a_1..a_n) / sum_n a_n for standard sequence families,
and classifies the (k, s, q) parameter space into Hardy / NotHardy / Open
regions.  See the ``hardy-means`` CLI for the command-line surface.
"""

from .classify import Classification, Reason, Verdict, classification_table, classify
from .cmn_means import (
    CmnEvalReport,
    EvalMethod,
    MeanParams,
    check_k_monotonicity,
    check_qs_monotonicity,
    cmn_mean_fast,
    cmn_mean_naive,
    cmn_mean_sampled,
    theorem1_identity_check,
)
from .errors import CapacityError, DomainError
from .hardy import (
    CustomTerms,
    Geometric,
    Harmonic,
    HarmonicTruncated,
    HardyEstimate,
    PowerTail,
    format_mean,
    hardy_partial_sum,
    iter_hardy_checkpoints,
    landau_constant,
    parse_family,
    parse_mean,
    sharpness_constant_sweep,
    sharpness_limit_curve,
    sharpness_limit_experiment,
    sharpness_sequence,
)
from .power_means import check_positive_vector, power_mean, power_mean_lower_bound_check
from .verification import PropertyResult, run_verification

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "Classification",
    "CmnEvalReport",
    "CustomTerms",
    "DomainError",
    "EvalMethod",
    "Geometric",
    "Harmonic",
    "HarmonicTruncated",
    "HardyEstimate",
    "MeanParams",
    "PowerTail",
    "PropertyResult",
    "Reason",
    "Verdict",
    "check_k_monotonicity",
    "check_positive_vector",
    "check_qs_monotonicity",
    "classification_table",
    "classify",
    "cmn_mean_fast",
    "cmn_mean_naive",
    "cmn_mean_sampled",
    "format_mean",
    "hardy_partial_sum",
    "iter_hardy_checkpoints",
    "landau_constant",
    "parse_family",
    "parse_mean",
    "power_mean",
    "power_mean_lower_bound_check",
    "run_verification",
    "sharpness_constant_sweep",
    "sharpness_limit_curve",
    "sharpness_limit_experiment",
    "sharpness_sequence",
    "theorem1_identity_check",
    "__version__",
]
