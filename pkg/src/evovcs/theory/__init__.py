"""Exact-rational contrast theory for evolving random-grid schemes."""

from .contrast import (
    BETTER2_LIMIT_SYMBOLIC,
    alpha_or_infinity,
    alpha_or_partition,
    alpha_or_stack_t,
    alpha_xor_infinity,
    alpha_xor_partition,
    better2_alpha,
    better2_alpha_infinity,
    better2_alpha_partition,
    better3_alpha,
    better3_alpha_infinity,
    better3_alpha_partition,
    better3_weights,
    contrast,
    or_transmissions,
    pr_even,
    sigma_or,
    sigma_xor,
    xor_transmissions,
)
from .curves import (
    ContrastCurve,
    CurveComparison,
    compare_curves,
    find_convergence_n,
    named_curve,
)
from .partitions import (
    canonical,
    count_matrices,
    group_shape,
    pr_distinct,
    raw_valid_partitions,
    valid_partitions,
    weight_partition,
)
