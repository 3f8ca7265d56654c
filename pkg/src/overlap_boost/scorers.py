"""Single-valued linear scorers: training, threshold selection, two-function
reduction, external score import, and weighted retraining on overlap cases.

A scorer is a coefficient vector plus a decision threshold T with a fixed
class orientation: a case scoring strictly above T gets the top class,
everything else (ties included) the bottom class.  Multiplying coefficients
and threshold by any c > 0 leaves every decision unchanged.
"""

from __future__ import annotations

import io
import csv
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from . import _kernels
from .dataset import Dataset, DatasetError
from .serialize import identity_hash

RIDGE_SCALE = 1e-6  # multiplies trace(S_W)/n_attributes on the scatter diagonal


class TrainingError(ValueError):
    """Raised when a scorer cannot be fit on the given data."""


@dataclass(frozen=True)
class LinearScorer:
    coefficients: np.ndarray
    threshold: float
    top_class: str
    bottom_class: str
    provenance: str = "trained"

    def __post_init__(self):
        coeffs = np.asarray(self.coefficients, dtype=np.float64)
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "threshold", float(self.threshold))

    @property
    def n_parameters(self) -> int:
        return len(self.coefficients) + 1

    def score(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        return X @ self.coefficients

    def score_one(self, x) -> float:
        return float(np.asarray(x, dtype=np.float64) @ self.coefficients)

    def classify(self, X: np.ndarray) -> np.ndarray:
        s = self.score(X)
        return np.where(s > self.threshold, self.top_class, self.bottom_class)

    def classify_one(self, x) -> str:
        return self.top_class if self.score_one(x) > self.threshold else self.bottom_class

    def to_json(self) -> dict:
        return {
            "coefficients": [float(c) for c in self.coefficients],
            "threshold": self.threshold,
            "top_class": self.top_class,
            "bottom_class": self.bottom_class,
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LinearScorer":
        return cls(
            np.array(obj["coefficients"], dtype=np.float64),
            float(obj["threshold"]),
            obj["top_class"],
            obj["bottom_class"],
            obj.get("provenance", "trained"),
        )

    @property
    def identity(self) -> str:
        return identity_hash(self.to_json())


@dataclass(frozen=True)
class ScoreVector:
    case_ids: np.ndarray
    values: np.ndarray
    provenance: str  # "trained" | "imported"

    def __post_init__(self):
        ids = np.asarray(self.case_ids, dtype=np.int64)
        vals = np.asarray(self.values, dtype=np.float64)
        if ids.shape != vals.shape:
            raise ValueError("case_ids and values misaligned")
        if vals.size and not np.all(np.isfinite(vals)):
            raise ValueError("scores contain non-finite values")
        ids.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "case_ids", ids)
        object.__setattr__(self, "values", vals)


def score_dataset(scorer: LinearScorer, d: Dataset) -> ScoreVector:
    return ScoreVector(d.case_ids.copy(), scorer.score(d.cases), "trained")


@dataclass(frozen=True)
class ThresholdChoice:
    value: float
    error_count: int
    degenerate: bool = False


def select_threshold(scores, labels, top_class: str, strategy: str = "min_error") -> ThresholdChoice:
    """Pick a decision threshold from training scores.

    min_error: midpoint between adjacent distinct sorted scores minimizing the
    training error count; among minimizers the midpoint of the widest score
    gap wins.  mid_gap: midpoint of the largest gap whose flanking cases carry
    different labels, regardless of error count.  All scores identical yields
    that score, flagged degenerate.
    """
    values = scores.values if isinstance(scores, ScoreVector) else np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if values.shape[0] != labels.shape[0]:
        raise ValueError("scores and labels misaligned")
    if values.shape[0] == 0:
        raise ValueError("cannot select a threshold from no cases")
    is_top = (labels == top_class).astype(np.uint8)
    if is_top.all() or not is_top.any():
        raise ValueError("threshold selection needs at least one case of each class")

    order = np.argsort(values, kind="stable")
    sv = values[order]
    st = is_top[order]
    boundaries = np.flatnonzero(sv[1:] != sv[:-1]) + 1  # cut positions at distinct-score changes
    if len(boundaries) == 0:
        t = float(sv[0])
        n_err = int(min(st.sum(), len(st) - st.sum()))
        # ties classify as bottom, so errors are exactly the top-class cases
        return ThresholdChoice(t, int(st.sum()), degenerate=True)

    if strategy == "min_error":
        errors = _kernels.cut_error_counts(st)
        cand_err = errors[boundaries]
        best = cand_err.min()
        gaps = sv[boundaries] - sv[boundaries - 1]
        mask = cand_err == best
        pick = boundaries[mask][np.argmax(gaps[mask])]
        t = float((sv[pick - 1] + sv[pick]) / 2.0)
        return ThresholdChoice(t, int(best))
    if strategy == "mid_gap":
        sl = labels[order]
        cross = np.array([sl[b - 1] != sl[b] for b in boundaries])
        usable = boundaries[cross] if cross.any() else boundaries
        gaps = sv[usable] - sv[usable - 1]
        pick = usable[int(np.argmax(gaps))]
        t = float((sv[pick - 1] + sv[pick]) / 2.0)
        errors = _kernels.cut_error_counts(st)
        return ThresholdChoice(t, int(errors[pick]), degenerate=bool(gaps.max() == 0.0))
    raise ValueError(f"unknown threshold strategy {strategy!r}")


def fisher_direction(X_top: np.ndarray, X_bottom: np.ndarray, attributes=None) -> np.ndarray:
    """Two-class discriminant direction from the pooled within-class scatter,
    ridge-stabilized, oriented so the top class has the higher mean score."""
    n_attrs = X_top.shape[1]
    Sw = np.zeros((n_attrs, n_attrs))
    for M in (X_top, X_bottom):
        centered = M - M.mean(axis=0)
        Sw += centered.T @ centered
    lam = RIDGE_SCALE * np.trace(Sw) / n_attrs
    mean_gap = X_top.mean(axis=0) - X_bottom.mean(axis=0)
    try:
        w = np.linalg.solve(Sw + lam * np.eye(n_attrs), mean_gap)
    except np.linalg.LinAlgError:
        names = list(attributes) if attributes is not None else list(range(n_attrs))
        raise TrainingError(f"singular within-class scatter over attributes {names}") from None
    if not np.all(np.isfinite(w)):
        names = list(attributes) if attributes is not None else list(range(n_attrs))
        raise TrainingError(f"singular within-class scatter over attributes {names}")
    if X_top.mean(axis=0) @ w < X_bottom.mean(axis=0) @ w:
        w = -w
    return w


def train_fisher(d: Dataset, top: str, bottom: str) -> LinearScorer:
    """Closed-form two-class discriminant scorer with a min-error threshold."""
    mask = np.isin(d.labels, [top, bottom])
    X, y = d.cases[mask], d.labels[mask]
    n_top = int((y == top).sum())
    n_bottom = int((y == bottom).sum())
    if n_top < 2 or n_bottom < 2:
        raise TrainingError(
            f"need at least two cases of each class, got {n_top} {top!r} / {n_bottom} {bottom!r}"
        )
    w = fisher_direction(X[y == top], X[y == bottom], d.attributes)
    scores = X @ w
    choice = select_threshold(scores, y, top, "min_error")
    return LinearScorer(w, choice.value, top, bottom, "trained")


def reduce_pair(f1: LinearScorer, f2: LinearScorer) -> LinearScorer:
    """Collapse a two-function comparison model into one scorer with T = 0.

    The returned scorer assigns f1's top class exactly when f1 scores strictly
    above f2.
    """
    if len(f1.coefficients) != len(f2.coefficients):
        raise ValueError(
            f"coefficient dimension mismatch: {len(f1.coefficients)} vs {len(f2.coefficients)}"
        )
    return LinearScorer(
        f1.coefficients - f2.coefficients, 0.0, f1.top_class, f2.top_class, "reduced"
    )


def import_scores(d: Dataset, source) -> ScoreVector:
    """Load externally produced per-case scores (mapping or CSV of
    case_id,score) and align them to the dataset's case order."""
    if isinstance(source, dict):
        pairs = [(int(k), float(v)) for k, v in source.items()]
    else:
        text = source
        if isinstance(source, bytes):
            text = source.decode("utf-8")
        elif hasattr(source, "read"):
            text = source.read()
            if isinstance(text, bytes):
                text = text.decode("utf-8")
        elif isinstance(source, str) and "\n" not in source:
            with open(source, "r", encoding="utf-8") as fh:
                text = fh.read()
        rows = [r for r in csv.reader(io.StringIO(text)) if r]
        if rows and not _is_number(rows[0][0]):
            rows = rows[1:]  # optional header
        pairs = []
        for r in rows:
            if len(r) < 2:
                raise ValueError(f"score row {r!r} needs case_id and score")
            pairs.append((int(r[0]), float(r[1])))

    seen: dict[int, float] = {}
    for cid, val in pairs:
        if cid in seen:
            raise ValueError(f"duplicate score for case id {cid}")
        seen[cid] = val
    missing = [int(i) for i in d.case_ids if int(i) not in seen]
    if missing:
        raise ValueError(f"missing scores for case ids: {missing}")
    extra = sorted(set(seen) - set(int(i) for i in d.case_ids))
    if extra:
        raise ValueError(f"scores for unknown case ids: {extra}")
    values = np.array([seen[int(i)] for i in d.case_ids], dtype=np.float64)
    return ScoreVector(d.case_ids.copy(), values, "imported")


def _is_number(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def _separating_direction(X: np.ndarray, is_top: np.ndarray) -> np.ndarray | None:
    """L1-minimal hard-margin separator via linear programming, or None when
    the two groups are not linearly separable."""
    n, k = X.shape
    sgn = np.where(is_top == 1, 1.0, -1.0)
    # variables: w (k), t (1), u (k) with u >= |w|
    c = np.concatenate([np.zeros(k + 1), np.ones(k)])
    A_margin = np.hstack([-sgn[:, None] * X, sgn[:, None], np.zeros((n, k))])
    b_margin = -np.ones(n)
    A_abs1 = np.hstack([np.eye(k), np.zeros((k, 1)), -np.eye(k)])
    A_abs2 = np.hstack([-np.eye(k), np.zeros((k, 1)), -np.eye(k)])
    A_ub = np.vstack([A_margin, A_abs1, A_abs2])
    b_ub = np.concatenate([b_margin, np.zeros(2 * k)])
    bounds = [(None, None)] * (k + 1) + [(0, None)] * k
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if not res.success:
        return None
    return res.x[:k]


def train_weighted_overlap(
    d_overlap: Dataset,
    formerly_mis,
    w1: float = 2.0,
    w2: float = 1.0,
    full: Dataset | None = None,
) -> LinearScorer:
    """Fit the overlap-area scorer by maximizing two-level weighted accuracy:
    w1 per formerly misclassified case now classified correctly plus w2 per
    other overlap case classified correctly.

    The search is exhaustive over a finite candidate set: the discriminant
    direction on the overlap cases, the discriminant on the full data when
    supplied, every single-attribute axis, every pairwise attribute
    difference, and (when the overlap cases are linearly separable) an
    LP-derived maximum-margin direction; each direction is tried in both
    orientations and swept over all threshold midpoints.  Ties break toward
    higher unweighted accuracy, then wider margin, then enumeration order.
    """
    if not (w1 >= w2 > 0):
        raise ValueError(f"weights must satisfy w1 >= w2 > 0, got w1={w1}, w2={w2}")
    if d_overlap.n_cases == 0:
        raise TrainingError("overlap set is empty")
    classes = d_overlap.class_names()
    if len(classes) < 2:
        raise TrainingError(f"overlap set contains a single class {classes}: nothing to separate")
    if len(classes) > 2:
        raise TrainingError(f"overlap scorer expects two classes, got {classes}")
    formerly_mis = set(int(i) for i in formerly_mis)
    unknown = formerly_mis - set(int(i) for i in d_overlap.case_ids)
    if unknown:
        raise DatasetError(f"formerly misclassified ids not in overlap set: {sorted(unknown)}")

    top, bottom = classes
    X = d_overlap.cases
    is_top = (d_overlap.labels == top).astype(np.uint8)
    is_mis = np.isin(d_overlap.case_ids, list(formerly_mis))
    case_w = np.where(is_mis, float(w1), float(w2))

    candidates: list[np.ndarray] = []
    try:
        candidates.append(fisher_direction(X[is_top == 1], X[is_top == 0], d_overlap.attributes))
    except TrainingError:
        pass
    if full is not None:
        mask = np.isin(full.labels, [top, bottom])
        Xf, yf = full.cases[mask], full.labels[mask]
        if (yf == top).sum() >= 2 and (yf == bottom).sum() >= 2:
            try:
                candidates.append(fisher_direction(Xf[yf == top], Xf[yf == bottom], full.attributes))
            except TrainingError:
                pass
    k = d_overlap.n_attributes
    for i in range(k):
        e = np.zeros(k)
        e[i] = 1.0
        candidates.append(e)
    for i in range(k):
        for j in range(i + 1, k):
            e = np.zeros(k)
            e[i], e[j] = 1.0, -1.0
            candidates.append(e)
    lp_dir = _separating_direction(X, is_top)
    if lp_dir is not None and np.any(lp_dir != 0.0):
        candidates.append(lp_dir)

    best = None  # (a_w, acc_count, margin, coeffs, threshold)
    for direction in candidates:
        for sign in (1.0, -1.0):
            w = sign * direction
            s = X @ w
            order = np.argsort(s, kind="stable")
            sv, st, sw = s[order], is_top[order], case_w[order]
            boundaries = np.flatnonzero(sv[1:] != sv[:-1]) + 1
            if len(boundaries) == 0:
                continue
            a_w = _kernels.cut_correct_weight(st, sw)
            correct = len(st) - _kernels.cut_error_counts(st)
            for b in boundaries:
                key = (float(a_w[b]), int(correct[b]), float((sv[b] - sv[b - 1]) / 2.0))
                if best is None or key > best[0]:
                    t = float((sv[b - 1] + sv[b]) / 2.0)
                    best = (key, w.copy(), t)
    if best is None:
        raise TrainingError("overlap cases are indistinguishable under every candidate direction")
    _, w, t = best
    return LinearScorer(w, t, top, bottom, "weighted_overlap")
