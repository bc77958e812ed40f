"""Decide (strict) positive and conditional negative definiteness of finite kernels.

Verdicts come with certificates; CND kernels get quadratic embeddings and
constant-shift decompositions; graph, group and continuous constructions
produce the kernels to test.
"""

from .continuous import (
    antipodal_quad,
    circle_kernel,
    circle_kernel_turns,
    euclidean_kernel,
    fourier_identity_check,
    limit_form,
    weighted_tree_kernel,
)
from .embedding import (
    ConstantShiftDecomposition,
    PointConfig,
    Sphere,
    affine_rank,
    circumsphere,
    constant_shift_decompose,
    is_affinely_independent,
    kernel_of_config,
    odd_cycle_embedding,
    quadratic_embed,
)
from .errors import (
    ConnectivityError,
    CSNDError,
    DegenerateInput,
    HypothesisNotMet,
    InvariantViolation,
    LabelError,
    NumericalIdentificationError,
    NumericalInconsistency,
    PresentationError,
)
from .graphs import (
    CycleCertificate,
    Graph,
    comb_product,
    complete_graph,
    cycle_graph,
    even_cycle_certificate,
    free_product_ball,
    free_product_ball_of,
    girth,
    interior_metric,
    parse_expression,
    path_graph,
    path_metric,
    star_graph,
    tree_from_parent_array,
    wedge_sum,
)
from .groups import (
    INF,
    CayleyBall,
    GroupPresentation,
    WordMetricVerdict,
    alternating_product,
    amalgam_cyclic_ball,
    coxeter_cayley_ball,
    free_group_ball,
    word_metric_verdict,
)
from .kernels import (
    DEFAULT_TOLERANCE,
    ClassReport,
    KernelMatrix,
    TolerancePolicy,
    Verdict,
    classify,
    cnd_decompose,
    csnd_by_bordered_determinant,
    csnd_by_invertibility,
    invertibility_verdict,
    markov_sum_kernel,
    schur_exponential,
    zero_sum_reduction,
)

__version__ = "0.1.0"
