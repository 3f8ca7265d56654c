"""Overlap analysis for a trained scorer: the score interval spanned by
misclassified cases, the axis-aligned box around them in feature space, the
multi-class generalization, and the positive-coefficient containment check
that makes sampling unnecessary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .dataset import Dataset
from .scorers import LinearScorer, ScoreVector

@dataclass(frozen=True)
class OverlapInterval:
    """Smallest score interval around the threshold containing every
    misclassified case's score.  case_c/case_d identify the boundary cases:
    the lowest-scoring misclassified top-class case and the highest-scoring
    misclassified bottom-class case."""

    a: float
    b: float
    case_c: int | None = None
    case_d: int | None = None
    empty: bool = False
    one_sided: bool = False
    spans_all: bool = False

    @property
    def length(self) -> float:
        return 0.0 if self.empty else self.b - self.a

    def contains(self, score) -> np.ndarray | bool:
        if self.empty:
            return np.zeros(np.shape(score), dtype=bool) if np.ndim(score) else False
        return (score >= self.a) & (score <= self.b)

    def to_json(self) -> dict:
        return {
            "a": float(self.a),
            "b": float(self.b),
            "case_c": self.case_c,
            "case_d": self.case_d,
            "empty": self.empty,
            "one_sided": self.one_sided,
            "spans_all": self.spans_all,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "OverlapInterval":
        return cls(
            float(obj["a"]),
            float(obj["b"]),
            obj.get("case_c"),
            obj.get("case_d"),
            bool(obj.get("empty", False)),
            bool(obj.get("one_sided", False)),
            bool(obj.get("spans_all", False)),
        )


@dataclass(frozen=True)
class Hyperblock:
    """Axis-aligned box given by per-attribute closed ranges."""

    lo: np.ndarray
    hi: np.ndarray
    attributes: tuple[str, ...]
    role: str = "overlap_area"  # or "pure_rectangle"
    provenance: str = ""

    def __post_init__(self):
        lo = np.asarray(self.lo, dtype=np.float64)
        hi = np.asarray(self.hi, dtype=np.float64)
        if np.any(lo > hi):
            raise ValueError("hyperblock has lo > hi on some attribute")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "attributes", tuple(self.attributes))

    def contains(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        return _kernels.box_contains(X, self.lo, self.hi)

    def contains_one(self, x) -> bool:
        return bool(self.contains(np.asarray(x).reshape(1, -1))[0])

    @property
    def degenerate(self) -> bool:
        return bool(np.all(self.lo == self.hi))

    def to_json(self) -> dict:
        return {
            "attributes": list(self.attributes),
            "lo": [float(v) for v in self.lo],
            "hi": [float(v) for v in self.hi],
            "role": self.role,
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Hyperblock":
        return cls(
            np.array(obj["lo"], dtype=np.float64),
            np.array(obj["hi"], dtype=np.float64),
            tuple(obj["attributes"]),
            obj.get("role", "overlap_area"),
            obj.get("provenance", ""),
        )


def _decide(values: np.ndarray, threshold: float, top_class: str, bottom_class: str) -> np.ndarray:
    return np.where(values > threshold, top_class, bottom_class)


def find_misclassified(
    scores: ScoreVector, labels, threshold: float, top_class: str, bottom_class: str
) -> np.ndarray:
    """Sorted ids of cases whose thresholded decision disagrees with their label."""
    labels = np.asarray(labels)
    if labels.shape[0] != scores.values.shape[0]:
        raise ValueError("scores and labels misaligned")
    decided = _decide(scores.values, threshold, top_class, bottom_class)
    return np.sort(scores.case_ids[decided != labels])


def compute_overlap_interval(
    scores: ScoreVector, labels, threshold: float, top_class: str, bottom_class: str
) -> OverlapInterval:
    """Interval [a, b] with a the minimum score over misclassified top-class
    cases and b the maximum over misclassified bottom-class cases.  With
    misclassifications on one side only, the clean bound is pinned at the
    threshold and the interval flagged one_sided; with none, it is empty.
    """
    labels = np.asarray(labels)
    values = scores.values
    decided = _decide(values, threshold, top_class, bottom_class)
    mis = decided != labels
    mis_top = mis & (labels == top_class)
    mis_bottom = mis & (labels == bottom_class)

    if not mis.any():
        return OverlapInterval(float(threshold), float(threshold), empty=True)

    if mis_top.any():
        a = float(values[mis_top].min())
        at = np.flatnonzero(mis_top & (values == a))
        case_c = int(scores.case_ids[at].min())
    else:
        a, case_c = float(threshold), None
    if mis_bottom.any():
        b = float(values[mis_bottom].max())
        at = np.flatnonzero(mis_bottom & (values == b))
        case_d = int(scores.case_ids[at].min())
    else:
        b, case_d = float(threshold), None
    one_sided = case_c is None or case_d is None

    interval = OverlapInterval(a, b, case_c, case_d, one_sided=one_sided)
    _assert_purity(interval, values, labels, top_class, bottom_class)
    return interval


def _assert_purity(interval, values, labels, top_class, bottom_class):
    below = values < interval.a
    above = values > interval.b
    if np.any(below & (labels != bottom_class)) or np.any(above & (labels != top_class)):
        raise AssertionError("overlap interval violates outside-purity conditions")


def compute_overlap_hyperblock(d: Dataset, misclassified) -> Hyperblock:
    """Componentwise min/max box over the misclassified cases."""
    ids = sorted(int(i) for i in misclassified)
    if not ids:
        raise ValueError("cannot build an overlap hyperblock from an empty case set")
    rows = d.rows_for_ids(ids)
    M = d.cases[rows]
    return Hyperblock(
        M.min(axis=0),
        M.max(axis=0),
        d.attributes,
        role="overlap_area",
        provenance="cases:" + ",".join(str(i) for i in ids),
    )


def multiclass_overlap_intervals(scores: ScoreVector, labels) -> list[OverlapInterval]:
    """Disjoint, ascending score intervals where class score ranges interleave.

    A score is mixed when it falls inside the [min, max] score span of two or
    more classes; each maximal stretch of mixed cases in score order yields
    one interval.  Fully interleaved data collapses to a single interval which
    is flagged spans_all.
    """
    labels = np.asarray(labels)
    values = scores.values
    classes = sorted(set(labels.tolist()))
    if len(classes) < 2:
        raise ValueError("multiclass overlap needs at least two classes")
    spans = {c: (values[labels == c].min(), values[labels == c].max()) for c in classes}

    order = np.argsort(values, kind="stable")
    sv = values[order]
    sid = scores.case_ids[order]
    coverage = np.zeros(len(sv), dtype=np.int64)
    for lo, hi in spans.values():
        coverage += ((sv >= lo) & (sv <= hi)).astype(np.int64)
    mixed = coverage >= 2

    intervals: list[OverlapInterval] = []
    starts, ends = _kernels.run_bounds(mixed.astype(np.int64))
    for s, e in zip(starts, ends):
        if not mixed[s]:
            continue
        spans_all = s == 0 and e == len(sv) - 1
        intervals.append(
            OverlapInterval(
                float(sv[s]),
                float(sv[e]),
                case_c=int(sid[s]),
                case_d=int(sid[e]),
                spans_all=bool(spans_all),
            )
        )
    return intervals


def class_score_order(scores: ScoreVector, labels) -> list[str]:
    """Classes sorted by ascending mean score (ties alphabetical)."""
    labels = np.asarray(labels)
    classes = sorted(set(labels.tolist()))
    return sorted(classes, key=lambda c: (float(scores.values[labels == c].mean()), c))


def representativeness_test(
    interval_train: OverlapInterval, interval_full: OverlapInterval, rho: float = 0.8
) -> str:
    """Compare the training-data overlap interval against the whole-data one:
    a training interval much shorter than the full interval means the training
    split does not capture the score distribution around the threshold."""
    if not 0 < rho <= 1:
        raise ValueError(f"rho must be in (0, 1], got {rho}")
    len_train = interval_train.length
    len_full = interval_full.length
    if interval_full.empty and not interval_train.empty:
        raise ValueError("inconsistent inputs: full-data interval empty but training interval is not")
    if interval_full.empty or len_full == 0.0:
        return "representative"
    return "representative" if len_train / len_full >= rho else "not_representative"


@dataclass(frozen=True)
class ContainmentVerdict:
    kind: str  # "proven_contained" | "shrink_advice" | "not_applicable"
    score_bot: float | None = None
    score_top: float | None = None
    effective_interval: tuple[float, float] | None = None


def check_linear_containment(
    f: LinearScorer, hb: Hyperblock, interval: OverlapInterval
) -> ContainmentVerdict:
    """With all-positive coefficients the box endpoints bound every interior
    score, so endpoint scores inside [a, b] prove containment without any
    sampling.  Endpoints falling outside produce shrink advice carrying the
    score range actually shared by box and interval; any non-positive
    coefficient makes the argument inapplicable.
    """
    coeffs = f.coefficients
    if np.any(coeffs <= 0.0):
        return ContainmentVerdict("not_applicable")
    s_bot = float(coeffs @ hb.lo)
    s_top = float(coeffs @ hb.hi)
    inside = interval.a <= s_bot <= interval.b and interval.a <= s_top <= interval.b
    if inside:
        return ContainmentVerdict("proven_contained", s_bot, s_top)
    effective = (max(interval.a, s_bot), min(interval.b, s_top))
    return ContainmentVerdict("shrink_advice", s_bot, s_top, effective)


def overlap_bundle_json(
    scorer: LinearScorer,
    interval: OverlapInterval,
    hb: Hyperblock | None,
    envelope_json: dict | None = None,
) -> dict:
    """Overlay payload consumed by the UI: interval + box (+ envelope), all
    stamped with the producing scorer's identity hash."""
    out = {
        "scorer_identity": scorer.identity,
        "interval": interval.to_json(),
        "hyperblock": hb.to_json() if hb is not None else None,
    }
    if envelope_json is not None:
        out["envelope"] = envelope_json
    return out
