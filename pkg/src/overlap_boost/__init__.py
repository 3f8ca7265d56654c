"""Class-overlap analysis and human-in-the-loop boosting for linear scorers
on tabular data: overlap intervals and hyperblocks, parallel-coordinates
envelopes, synthetic probing, two-stage boosted models, and interval-rule
decision lists."""

from .boost import BoostedModel, compose_boosted, predict_boosted
from .dataset import (
    Dataset,
    DatasetError,
    FeatureExpr,
    NormMeta,
    denormalize,
    engineer_features,
    load_csv,
    minmax_normalize,
    remove_covered,
    sort_attributes_by_correlation,
)
from .envelope import Envelope, build_modified_envelope, envelope_contains
from .fol import (
    MonotonicRule,
    SlopeRule,
    SlopeTerm,
    classify_monotonic,
    evaluate_slope_rules,
    monotonic_chain_counts,
)
from .overlap import (
    ContainmentVerdict,
    Hyperblock,
    OverlapInterval,
    check_linear_containment,
    class_score_order,
    compute_overlap_hyperblock,
    compute_overlap_interval,
    find_misclassified,
    multiclass_overlap_intervals,
    representativeness_test,
)
from .rules import (
    BlockRule,
    DecisionList,
    Fallback,
    GeneralizedDT,
    IntervalRule,
    discover_pure_intervals,
    dnc_run,
    prune_redundant,
    to_generalized_dt,
)
from .scorers import (
    LinearScorer,
    ScoreVector,
    ThresholdChoice,
    TrainingError,
    import_scores,
    reduce_pair,
    score_dataset,
    select_threshold,
    train_fisher,
    train_weighted_overlap,
)
from .synth import (
    EvalReport,
    EvidenceReport,
    PureRegion,
    SyntheticBatch,
    evaluate_overlap,
    generate_synthetic,
    pure_area_evidence,
)

__version__ = "0.1.0"
