"""Fast sparse multivariate polynomial and truncated power-series products.

The core multiplies sparse polynomials over a prime field by evaluating
both factors at powers of a high-order field element (through a mixed-radix
packing of exponent vectors), multiplying pointwise, and interpolating back
on a support known to contain the product.  Integer, rational and floating
coefficients reduce to the prime-field core through big-prime or Chinese
remainder lifting; truncated total-degree series products go through a
projective change of variables and slicewise evaluation.
"""

from .modular import (
    FieldElement,
    PrimeField,
    element_order,
    factorize,
    find_order_element,
    is_prime,
)
from .densepoly import (
    DensePoly,
    PointSet,
    SubproductTree,
    interpolate,
    multipoint_eval,
    poly_mul,
    set_multiplication_strategy,
    subproduct_tree,
    transposed_eval,
    transposed_interp,
)
from .sparse import (
    QQ,
    ZZ,
    KroneckerMap,
    SparsePoly,
    SupportSet,
    SupportStats,
    eval_points,
    kronecker_index,
    kronecker_radices,
    naive_mul,
    sparse_mul_given_support,
    sumset_support,
    support_stats,
)
from .rings import (
    CoeffBound,
    FloatPoly,
    ReducedPrimeSequence,
    coeff_bound,
    crt_combine,
    float_scale,
    float_sparse_mul,
    integer_sparse_mul,
    next_prime_above,
    rational_sparse_mul,
    reduced_prime_sequence,
)
from .series import (
    InitialSegment,
    SliceStack,
    TruncatedSeries,
    initial_segment,
    inverse_projective_transform,
    naive_series_mul,
    projective_transform,
    series_mul,
)

__all__ = [
    "FieldElement",
    "PrimeField",
    "element_order",
    "factorize",
    "find_order_element",
    "is_prime",
    "DensePoly",
    "PointSet",
    "SubproductTree",
    "interpolate",
    "multipoint_eval",
    "poly_mul",
    "set_multiplication_strategy",
    "subproduct_tree",
    "transposed_eval",
    "transposed_interp",
    "QQ",
    "ZZ",
    "KroneckerMap",
    "SparsePoly",
    "SupportSet",
    "SupportStats",
    "eval_points",
    "kronecker_index",
    "kronecker_radices",
    "naive_mul",
    "sparse_mul_given_support",
    "sumset_support",
    "support_stats",
    "CoeffBound",
    "FloatPoly",
    "ReducedPrimeSequence",
    "coeff_bound",
    "crt_combine",
    "float_scale",
    "float_sparse_mul",
    "integer_sparse_mul",
    "next_prime_above",
    "rational_sparse_mul",
    "reduced_prime_sequence",
    "InitialSegment",
    "SliceStack",
    "TruncatedSeries",
    "initial_segment",
    "inverse_projective_transform",
    "naive_series_mul",
    "projective_transform",
    "series_mul",
]

__version__ = "0.1.0"
