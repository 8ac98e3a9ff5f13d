"""growthlab: a numerical laboratory for weighted Hardy-Sobolev-Morrey
growth-transfer inequalities.

The library measures polynomial (or exponential) growth of functions on R^N
in the L^p sense through weighted norms, constructs the canonical polynomial
whose subtraction makes the growth-transfer inequalities hold, and verifies
those inequalities numerically on spherical-polar quadrature grids.
"""

from .errors import (
    ConfigError,
    DimensionOne,
    DivergentRhs,
    EmptyEffective,
    ExcludedS,
    GrowthLabError,
    InadmissiblePQ,
    NoConvergence,
    NoDecay,
    NonIntegrable,
    OrderTooHigh,
    OriginSingular,
    SZero,
)
from .exponents import (
    AdmissibleInterval,
    Exponent,
    Regime,
    RegimeInfo,
    admissible_interval,
    holder_conjugate,
    interval_composition_check,
    regime,
    sobolev_exponent,
    tensor_dim,
)
from .fields import (
    FIELD_REGISTRY,
    ScalarField,
    TensorField,
    annulus_max,
    dilate,
    evaluate_on_grid,
    from_callable,
    gradient_k,
    lin_combine,
    make_field,
    mollify_error,
    multi_indices,
    polynomial_field,
    product_field,
    radial_symmetrize,
    shift,
    spherical_mean,
)
from .grids import BallRule, Domain, PolarGrid, sphere_rule, sphere_surface, unit_ball_volume
from .hardy import (
    RadialProfile,
    hardy_exponential,
    hardy_pair_power_above,
    hardy_pair_power_below,
    hardy_sup_power_above,
    hardy_sup_power_below,
    ok_criterion,
    ok_criterion_ex,
)
from .norms import Region, Scale, Weight, membership, tensor_norm, weighted_norm
from .polynomials import (
    MultiIndexPolynomial,
    PiStrategy,
    ball_average_coeff,
    construct_pi,
    limit_coeff,
    poly_membership,
    taylor_coeff,
)
from .verify import (
    InequalityCase,
    Report,
    SymmetrizationSplit,
    ckn_split_verify,
    decay_check,
    default_family,
    embedding_report,
    estimate_constant,
    estimate_constant_ex,
    exp_verify,
    mixed_family,
    scaling_experiment,
    symmetrization_split,
    verify_case,
)

__version__ = "0.1.0"
