"""First-order rules over several attributes: strict monotonic value chains
and slope-difference comparisons against a reference class.

Monotonic rules have no numeric thresholds at all, so they survive any common
strictly increasing rescaling of the attributes.  Slope rules compile their
reference-class comparison into extremum thresholds over the reference
training cases, with strict inequalities so no reference case ever fires the
rule on the data it was built from.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset


@dataclass(frozen=True)
class MonotonicRule:
    attributes: tuple[int, ...]  # indices; values must strictly decrease along them
    target_class: str

    def __post_init__(self):
        if len(self.attributes) < 2:
            raise ValueError("a monotonic chain needs at least two attributes")
        object.__setattr__(self, "attributes", tuple(int(i) for i in self.attributes))

    def holds(self, case) -> bool:
        vals = np.asarray(case, dtype=np.float64)[list(self.attributes)]
        return bool(np.all(vals[:-1] > vals[1:]))

    def to_json(self) -> dict:
        return {"attributes": list(self.attributes), "target_class": self.target_class}


def classify_monotonic(rule: MonotonicRule, case):
    """Target class when the strict chain holds, else None (no match)."""
    return rule.target_class if rule.holds(case) else None


def monotonic_chain_counts(d: Dataset, attr_order) -> dict[str, int]:
    """Per-class count of cases whose values strictly decrease along the
    given attribute order."""
    idx = [a if isinstance(a, int) else d.attr_index(a) for a in attr_order]
    if len(idx) < 2:
        raise ValueError("chain needs at least two attributes")
    V = d.cases[:, idx]
    holds = np.all(V[:, :-1] > V[:, 1:], axis=1)
    return {c: int((holds & (d.labels == c)).sum()) for c in d.class_names()}


@dataclass(frozen=True)
class SlopeTerm:
    pair: tuple[int, int]  # attribute indices (i, j); the compared quantity is x_i - x_j
    direction: str  # "ge": reference diffs >= case diff; "le": reference diffs <= case diff

    def __post_init__(self):
        if self.direction not in ("ge", "le"):
            raise ValueError(f"direction must be 'ge' or 'le', got {self.direction!r}")
        object.__setattr__(self, "pair", (int(self.pair[0]), int(self.pair[1])))


@dataclass(frozen=True)
class SlopeRule:
    terms: tuple[SlopeTerm, ...]
    thresholds: tuple[float, ...]  # extremum of x_i - x_j over reference cases, per term
    reference_class: str
    inferred_class: str

    @property
    def degenerate(self) -> bool:
        return len(self.terms) == 0

    def fires(self, case) -> bool:
        """Vacuously true with no terms; otherwise every term must hold with a
        strict inequality against its reference-class extremum."""
        case = np.asarray(case, dtype=np.float64)
        for term, threshold in zip(self.terms, self.thresholds):
            i, j = term.pair
            diff = float(case[i] - case[j])
            if term.direction == "ge":
                if not diff < threshold:
                    return False
            else:
                if not diff > threshold:
                    return False
        return True

    def fires_mask(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        mask = np.ones(X.shape[0], dtype=bool)
        for term, threshold in zip(self.terms, self.thresholds):
            i, j = term.pair
            diff = X[:, i] - X[:, j]
            mask &= diff < threshold if term.direction == "ge" else diff > threshold
        return mask

    def to_json(self) -> dict:
        return {
            "terms": [
                {"pair": list(t.pair), "direction": t.direction, "threshold": float(th)}
                for t, th in zip(self.terms, self.thresholds)
            ],
            "reference_class": self.reference_class,
            "inferred_class": self.inferred_class,
        }


@dataclass(frozen=True)
class SlopeRuleReport:
    rule: SlopeRule
    inferred_fired: int
    inferred_total: int
    reference_fired: int
    other_fired: int
    coverage: float  # fired share of the inferred class
    precision: float  # inferred share of all fired cases
    degenerate: bool = False

    def to_json(self) -> dict:
        return {
            "rule": self.rule.to_json(),
            "inferred_fired": self.inferred_fired,
            "inferred_total": self.inferred_total,
            "reference_fired": self.reference_fired,
            "other_fired": self.other_fired,
            "coverage": self.coverage,
            "precision": self.precision,
            "degenerate": self.degenerate,
        }


def evaluate_slope_rules(
    d: Dataset, reference_class: str, inferred_class: str, terms
) -> SlopeRuleReport:
    """Compile slope-difference terms against the reference class's extrema
    and report how the resulting rule behaves on the dataset.

    A 'ge' term (reference differences dominate) becomes: the case's
    difference is strictly below the reference minimum; 'le' becomes strictly
    above the reference maximum.  By construction the rule never fires on a
    reference training case.
    """
    terms = tuple(t if isinstance(t, SlopeTerm) else SlopeTerm(*t) for t in terms)
    ref_mask = d.labels == reference_class
    if not ref_mask.any():
        raise ValueError(f"reference class {reference_class!r} has no cases")
    if not (d.labels == inferred_class).any():
        raise ValueError(f"inferred class {inferred_class!r} has no cases")
    R = d.cases[ref_mask]
    thresholds = []
    for term in terms:
        i, j = term.pair
        diffs = R[:, i] - R[:, j]
        thresholds.append(float(diffs.min() if term.direction == "ge" else diffs.max()))
    rule = SlopeRule(terms, tuple(thresholds), reference_class, inferred_class)

    fired = rule.fires_mask(d.cases)
    inf_mask = d.labels == inferred_class
    inferred_fired = int((fired & inf_mask).sum())
    reference_fired = int((fired & ref_mask).sum())
    other_fired = int((fired & ~inf_mask & ~ref_mask).sum())
    total_fired = int(fired.sum())
    return SlopeRuleReport(
        rule=rule,
        inferred_fired=inferred_fired,
        inferred_total=int(inf_mask.sum()),
        reference_fired=reference_fired,
        other_fired=other_fired,
        coverage=inferred_fired / int(inf_mask.sum()),
        precision=inferred_fired / total_fired if total_fired else 0.0,
        degenerate=rule.degenerate,
    )
