"""biaslab: exact bias/rank laboratory over prime fields.

Character sums are exact cyclotomic integers with certified interval
moduli; distributions are exact rationals; every inequality checked by the
verification suites is decided with exact or certified arithmetic.
"""

__version__ = "0.1.0"

from .errors import BiaslabError, DEFAULT_BUDGET
from .fpcore import (
    BiasValue,
    Cyclotomic,
    FieldCtx,
    Ordering,
    ValueCount,
    bias_from_counts,
    make_field,
    modulus_compare,
)
from .poly import (
    Polynomial,
    PolyRankCertificate,
    Shape,
    alphabet_reduce,
    decompose_pieces,
    evaluate,
    linear_rank,
    polarize,
    quadratic_essential_rank,
    quadratic_rank,
    quadratic_rank_certificate,
    vanishes_on,
    verify_rank_certificate,
)
from .tensor import (
    PartitionRankCertificate,
    PartitionTerm,
    RankBound,
    Tensor,
    TensorRankCertificate,
    analytic_rank,
    disjoint_pr,
    essential_pr,
    mlf_eval,
    partition_rank,
    restrict,
    surjective_on,
    tensor_rank,
    verify_pr_certificate,
    verify_tr_certificate,
)
from .dist import (
    BoxFunction,
    Distribution,
    affine_mass,
    convolve,
    deconvolve_u,
    difference_dist,
    max_convolve,
    mixing_check,
    negate,
    project_dist,
    self_convolve,
    sumset_density_check,
)
from .bias import (
    box_norm,
    decoupling_check,
    mlf_bias_dist,
    multi_alphabet_bias,
    poly_bias,
    poly_bias_dist,
    reduction_lemma_check,
    restrict_piece,
)
from . import bounds
