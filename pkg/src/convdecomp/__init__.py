"""Exact convex decomposition of scaled packing-relaxation optima.

Given a packing problem, a gap verifier for it, and an optimum of its
linear relaxation, this package expresses the optimum, scaled down by the
gap constant and a small configurable slack, as a convex combination of
feasible 0/1 points whose barycenter equals the scaled optimum bit for
bit.  All arithmetic is exact rational.
"""

from .epsilon import (
    EpsilonRun,
    IterationRecord,
    decompose_epsilon,
    iteration_budget,
    optimal_step,
)
from .errors import (
    DecompositionError,
    DegenerateSegment,
    DimensionMismatch,
    DominanceViolation,
    IneligibleInstanceError,
    InfeasiblePoint,
    InstanceFormatError,
    SlackTooSmall,
    VerifierGapViolation,
    VerifierViolation,
)
from .exact import (
    ExactRun,
    build_dominating,
    ceil_sqrt,
    decompose_exact,
    minimum_slack,
    reduce_to_exact,
    unit_points_feasible,
)
from .geometry import (
    BinaryPoint,
    ConvexCombination,
    RVector,
    l1_distance,
    mix,
    squared_l2,
    to_rational,
)
from .problems import (
    ExplicitPolytope,
    ExplicitProblem,
    ExplicitVerifier,
    KnapsackInstance,
    KnapsackProblem,
    KnapsackVerifier,
    PackingProblem,
    ValidationReport,
    brute_force_integer_bound,
    brute_force_lp_bound,
    feasible_points,
    load_instance,
    validate_decomposition,
)
from .verifier import ExtendedVerifier, GapVerifier, clip_negative

__version__ = "0.1.0"

__all__ = [
    "BinaryPoint",
    "ConvexCombination",
    "DecompositionError",
    "DegenerateSegment",
    "DimensionMismatch",
    "DominanceViolation",
    "EpsilonRun",
    "ExactRun",
    "ExplicitPolytope",
    "ExplicitProblem",
    "ExplicitVerifier",
    "ExtendedVerifier",
    "GapVerifier",
    "IneligibleInstanceError",
    "InfeasiblePoint",
    "InstanceFormatError",
    "IterationRecord",
    "KnapsackInstance",
    "KnapsackProblem",
    "KnapsackVerifier",
    "PackingProblem",
    "RVector",
    "SlackTooSmall",
    "ValidationReport",
    "VerifierGapViolation",
    "VerifierViolation",
    "brute_force_integer_bound",
    "brute_force_lp_bound",
    "build_dominating",
    "ceil_sqrt",
    "clip_negative",
    "decompose_epsilon",
    "decompose_exact",
    "feasible_points",
    "iteration_budget",
    "l1_distance",
    "load_instance",
    "minimum_slack",
    "mix",
    "optimal_step",
    "reduce_to_exact",
    "squared_l2",
    "to_rational",
    "unit_points_feasible",
    "validate_decomposition",
]
