"""Exact polytope toolkit for correlations from shared randomness plus
limited classical communication: vertex enumeration, facet (hull) conversion,
local-equivalence classification, and communication-cost bounds."""

from .core import (
    ALICE,
    BIDIR,
    BOB,
    FIXED,
    BidirReducedPoint,
    CorrelationTable,
    FixedReducedPoint,
    FormatError,
    LinearEquation,
    LinearInequality,
    Marginal,
    NoSignalingReport,
    Rational,
    Scenario,
    SignalingError,
    ValidationReport,
    check_no_signaling,
    evaluate_inequality,
    lift_bidir,
    lift_fixed,
    marginals,
    project_bidir,
    project_fixed,
    validate_table,
)
from .strategies import (
    AB,
    BA,
    BidirCcStrategy,
    FixedCcStrategy,
    Grouping,
    LsrStrategy,
    StrategyEnsemble,
    ensemble_to_table,
    enumerate_bidir_cc_vertices,
    enumerate_fixed_cc_vertices,
    enumerate_groupings,
    enumerate_lsr_vertices,
    stirling_second_kind,
    strategy_to_table,
)
from .polyhedra import (
    ContainmentReport,
    HRep,
    Inside,
    MembershipResult,
    Outside,
    VRep,
    affine_dimension,
    contains_polytope,
    facets_from_vertices,
    membership,
)
from .symmetry import (
    InequalityClass,
    LocalSymmetry,
    act_on_inequality,
    act_on_table,
    canonical_inequality,
    partition_into_classes,
    symmetry_group,
)
from .bounds import (
    CertificateTriple,
    LowerBoundReport,
    bacon_toner_ensemble,
    certificate_triple,
    hat_distribution,
    lower_bound_report,
    strategy_consistent_with_hat,
)

__version__ = "0.1.0"
