"""Trace distances of bosonic Gaussian states in Krylov subspace.

The package computes trace distances between continuous-variable states
parametrized by first moments and covariance matrices: exactly for a
pure state against a mixed one, for linear combinations of pure
Gaussian kets, and as certified lower bounds for pairs of mixed states.
An independent truncated-Fock oracle backs every estimator.
"""

from .gauss import (
    GaussianState,
    PureGaussianKet,
    ValidityReport,
    WilliamsonFactorization,
    coherent,
    loss_channel,
    make_state,
    product_state,
    pure_symplectic_factor,
    relative_to_vacuum,
    squashed,
    squeezed_vacuum,
    symplectic_form,
    thermal,
    vacuum,
    validate,
    williamson,
)
from .bargmann import (
    multivariate_trace,
    pure_moment_invariant,
    pure_overlap,
    vacuum_probability,
)
from .moments import (
    LinearCombinationKet,
    LinearCombinationOperator,
    MetricPair,
    MomentSequence,
    ProductMixture,
    hankel_metrics,
    moments_gaussian,
    moments_lincomb,
    moments_lincomb_difference,
    moments_mixed_difference,
    moments_product_mixture,
    outer_to_product,
)
from .lanczos import (
    DistanceEstimate,
    LanczosWorkspace,
    trace_distance_lower_bound,
    trace_distance_pure_mixed,
)
from .bounds import (
    VariationalReport,
    fidelity_sandwich,
    pure_pure_distance,
    variational_lower_bound,
)

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
