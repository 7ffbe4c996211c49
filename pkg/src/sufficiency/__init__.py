"""Optimal randomized classification under sufficiency from finite calibrated scores.

A classifier satisfies sufficiency (predictive parity) when its positive
predictive value ``p`` and false omission rate ``q`` agree across groups.
For each group the attainable ``(p, q)`` pairs form a convex region bounded
by a piecewise curve traced by soft-threshold rules; this package computes
those regions, their two-group intersection, and the best point on the
intersection for an expected loss or for a separation-gap objective.
"""

from types import ModuleType as _ModuleType

from .calibration import CalibrationResult, RawRow, calibrate_scores
from .classifier import (
    FairClassifier,
    build_fair_classifier,
    classifier_report,
    predict,
    rule_loss,
    tv_separation_gap,
)
from .errors import (
    DegeneratePair,
    DegenerateSupport,
    EmptyBinInCalibrationSplit,
    EmptyInput,
    EmptyIntersection,
    GridTooLarge,
    IndexOutOfRange,
    InfeasiblePair,
    InputError,
    InsufficientData,
    MuOutOfRange,
    NonPositiveWeight,
    POutOfRange,
    ScoreOutOfRange,
    SufficiencyError,
    UnknownScore,
    VerificationFailure,
    WeightSumError,
)
from .intersection import (
    BoundarySegment,
    IntersectionSummary,
    compute_pmax_qmin,
    degenerate_pairs,
    intersection_boundary_q,
    intersection_nonempty,
    phi,
    phi_coefficients,
    trace_boundary,
)
from .objectives import (
    ZERO_ONE,
    LossSpec,
    OptimalSolution,
    PopulationWeights,
    dsep,
    evaluate,
    expected_loss,
    minimize_on_boundary,
)
from .oracle import enumerate_feasible, lp_max_p, verify_region
from .region import (
    FeasiblePair,
    SelectionRule,
    boundary_q,
    contains,
    p_star,
    q_star,
    rule_for_pair,
    rule_metrics,
    soft_threshold_rule,
)
from .score_model import GroupDistribution, ScoreBin, build_group_distribution

__version__ = "0.1.0"

__all__ = [name for name, value in globals().items()
           if not name.startswith("_") and not isinstance(value, _ModuleType)]
