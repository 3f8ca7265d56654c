"""Pure-interval rule discovery and the iterative carve-and-remove loop that
assembles rules into an ordered decision list.

A rule covers a closed value range on one attribute (or a conjunction of
ranges for rectangles marked over several axes) and is pure on the snapshot it
was induced from.  Lists use first-match semantics: a rule from iteration i
fires only when every earlier rule failed, which is exactly what removing
covered cases between iterations produces.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .dataset import Dataset, majority_label, remove_covered


@dataclass(frozen=True)
class IntervalRule:
    attribute: int
    attribute_name: str
    lo: float
    hi: float
    label: str
    iteration: int = 0
    coverage: int = 0
    class_share: float = 0.0
    dataset_share: float = 0.0

    def covered_mask(self, X: np.ndarray) -> np.ndarray:
        col = X[:, self.attribute]
        return (col >= self.lo) & (col <= self.hi)

    def matches(self, case) -> bool:
        v = float(np.asarray(case)[self.attribute])
        return self.lo <= v <= self.hi

    def to_json(self) -> dict:
        return {
            "kind": "interval",
            "attribute": self.attribute,
            "attribute_name": self.attribute_name,
            "lo": float(self.lo),
            "hi": float(self.hi),
            "label": self.label,
            "iteration": self.iteration,
            "coverage": self.coverage,
            "class_share": self.class_share,
            "dataset_share": self.dataset_share,
        }

    def to_text(self) -> str:
        return (
            f"If {self.lo!r} <= {self.attribute_name}(x) <= {self.hi!r} "
            f"then x is {self.label}  [iteration {self.iteration}, {self.coverage} cases]"
        )


@dataclass(frozen=True)
class BlockRule:
    """Conjunction of closed per-attribute ranges, from a rectangle marked
    across several axes."""

    constraints: tuple[tuple[int, str, float, float], ...]  # (attr, name, lo, hi)
    label: str
    iteration: int = 0
    coverage: int = 0
    class_share: float = 0.0
    dataset_share: float = 0.0

    def covered_mask(self, X: np.ndarray) -> np.ndarray:
        mask = np.ones(X.shape[0], dtype=bool)
        for attr, _, lo, hi in self.constraints:
            col = X[:, attr]
            mask &= (col >= lo) & (col <= hi)
        return mask

    def matches(self, case) -> bool:
        case = np.asarray(case)
        return all(lo <= float(case[attr]) <= hi for attr, _, lo, hi in self.constraints)

    # ordering stand-ins so block rules sort alongside interval rules
    @property
    def attribute(self) -> int:
        return self.constraints[0][0]

    @property
    def lo(self) -> float:
        return self.constraints[0][2]

    def to_json(self) -> dict:
        return {
            "kind": "block",
            "constraints": [
                {"attribute": a, "attribute_name": n, "lo": float(lo), "hi": float(hi)}
                for a, n, lo, hi in self.constraints
            ],
            "label": self.label,
            "iteration": self.iteration,
            "coverage": self.coverage,
            "class_share": self.class_share,
            "dataset_share": self.dataset_share,
        }

    def to_text(self) -> str:
        parts = " and ".join(
            f"{lo!r} <= {name}(x) <= {hi!r}" for _, name, lo, hi in self.constraints
        )
        return f"If {parts} then x is {self.label}  [iteration {self.iteration}, {self.coverage} cases]"


def rule_from_json(obj: dict):
    if obj.get("kind") == "block":
        return BlockRule(
            tuple(
                (c["attribute"], c["attribute_name"], float(c["lo"]), float(c["hi"]))
                for c in obj["constraints"]
            ),
            obj["label"],
            obj["iteration"],
            obj["coverage"],
            obj["class_share"],
            obj["dataset_share"],
        )
    return IntervalRule(
        obj["attribute"],
        obj["attribute_name"],
        float(obj["lo"]),
        float(obj["hi"]),
        obj["label"],
        obj["iteration"],
        obj["coverage"],
        obj["class_share"],
        obj["dataset_share"],
    )


@dataclass(frozen=True)
class Fallback:
    kind: str  # "abstain" | "majority_class" | "user_merge"
    label: str | None = None

    def to_json(self) -> dict:
        return {"kind": self.kind, "label": self.label}

    @classmethod
    def from_json(cls, obj) -> "Fallback":
        return cls(obj["kind"], obj.get("label"))


@dataclass(frozen=True)
class DecisionList:
    rules: tuple
    fallback: Fallback
    attributes: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "attributes", tuple(self.attributes))

    def classify_one(self, case):
        for rule in self.rules:
            if rule.matches(case):
                return rule.label
        if self.fallback.kind == "abstain":
            return None
        return self.fallback.label

    def classify(self, X: np.ndarray) -> list:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        return [self.classify_one(row) for row in X]

    def first_match_counts(self, X: np.ndarray) -> list[int]:
        """Per-rule count of cases whose first matching rule it is."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        taken = np.zeros(X.shape[0], dtype=bool)
        counts = []
        for rule in self.rules:
            hit = rule.covered_mask(X) & ~taken
            counts.append(int(hit.sum()))
            taken |= hit
        return counts

    def to_json(self) -> dict:
        return {
            "semantics_version": 1,
            "attributes": list(self.attributes),
            "rules": [r.to_json() for r in self.rules],
            "fallback": self.fallback.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "DecisionList":
        return cls(
            tuple(rule_from_json(r) for r in obj["rules"]),
            Fallback.from_json(obj["fallback"]),
            tuple(obj["attributes"]),
        )

    def to_text(self) -> str:
        lines = [rule.to_text() for rule in self.rules]
        if self.fallback.kind == "abstain":
            lines.append("Else abstain")
        else:
            lines.append(f"Else x is {self.fallback.label}  [{self.fallback.kind}]")
        return "\n".join(lines)


def discover_pure_intervals(
    d: Dataset, attribute: str | int, min_coverage: int = 1, iteration: int = 0
) -> list[IntervalRule]:
    """All maximal single-class runs over the sorted values of one attribute.

    A run is bounded by the covered data values themselves.  Any value shared
    by two classes breaks purity, so ties across classes always terminate a
    run.  Runs covering fewer than min_coverage cases are dropped.  Returned
    in ascending value order.
    """
    if min_coverage < 1:
        raise ValueError("min_coverage must be at least 1")
    idx = attribute if isinstance(attribute, int) else d.attr_index(attribute)
    name = d.attributes[idx]
    n = d.n_cases
    if n == 0:
        return []
    col = d.cases[:, idx]
    order = np.argsort(col, kind="stable")
    sv, sl = col[order], d.labels[order]

    # per distinct value: the single covering class, or -1 when mixed
    classes = sorted(set(d.labels.tolist()))
    code_of = {c: i for i, c in enumerate(classes)}
    boundaries = np.concatenate(([0], np.flatnonzero(sv[1:] != sv[:-1]) + 1, [n]))
    value_codes = []
    value_counts = []
    for s, e in zip(boundaries[:-1], boundaries[1:]):
        labs = set(sl[s:e].tolist())
        value_codes.append(code_of[next(iter(labs))] if len(labs) == 1 else -1)
        value_counts.append(e - s)
    value_codes = np.array(value_codes, dtype=np.int64)
    value_counts = np.array(value_counts, dtype=np.int64)
    distinct = sv[boundaries[:-1]]

    class_totals = {c: int((d.labels == c).sum()) for c in classes}
    rules: list[IntervalRule] = []
    starts, ends = _kernels.run_bounds(value_codes)
    for s, e in zip(starts, ends):
        code = value_codes[s]
        if code < 0:
            continue
        label = classes[code]
        coverage = int(value_counts[s : e + 1].sum())
        if coverage < min_coverage:
            continue
        rules.append(
            IntervalRule(
                attribute=idx,
                attribute_name=name,
                lo=float(distinct[s]),
                hi=float(distinct[e]),
                label=label,
                iteration=iteration,
                coverage=coverage,
                class_share=coverage / class_totals[label],
                dataset_share=coverage / n,
            )
        )
    return rules


def _candidate_sort_key(rule: IntervalRule):
    return (-rule.coverage, rule.attribute, rule.lo)


def prune_redundant(rules, d: Dataset) -> list:
    """Greedy set-cover retention in decreasing coverage order (ties toward
    lower attribute index, then lower interval start).  A rule is dropped
    exactly when the retained rules already cover all its cases, so the
    union of covered cases is preserved.
    """
    ordered = sorted(rules, key=_candidate_sort_key)
    covered = np.zeros(d.n_cases, dtype=bool)
    retained = []
    for rule in ordered:
        mask = rule.covered_mask(d.cases)
        if np.any(mask & ~covered):
            retained.append(rule)
            covered |= mask
    return retained


def _restate_first_match(rules, d: Dataset) -> list:
    """Recompute coverage and shares under first-match semantics on d."""
    taken = np.zeros(d.n_cases, dtype=bool)
    out = []
    for rule in rules:
        hit = rule.covered_mask(d.cases) & ~taken
        coverage = int(hit.sum())
        taken |= hit
        class_total = int((d.labels == rule.label).sum())
        out.append(
            replace(
                rule,
                coverage=coverage,
                class_share=coverage / class_total if class_total else 0.0,
                dataset_share=coverage / d.n_cases if d.n_cases else 0.0,
            )
        )
    return out


def default_min_coverage(d: Dataset) -> int:
    """max(3, 5% of the smallest class) guards against splinter rules."""
    counts = [int((d.labels == c).sum()) for c in d.class_names()]
    smallest = min(counts) if counts else 0
    return max(3, int(np.ceil(0.05 * smallest)))


def dnc_run(
    d: Dataset,
    min_coverage: int | None = None,
    max_iterations: int | None = None,
    interactive_hooks=None,
) -> DecisionList:
    """Iterative divide-and-classify: discover pure interval runs on every
    attribute of the remaining cases, keep a non-redundant subset, emit them
    as this iteration's rules, remove the covered cases, and repeat until
    nothing remains, nothing qualifies, or the iteration budget is spent.

    interactive_hooks, when given, is called as hooks(iteration, candidates,
    remaining) and returns the accepted subset; returning an empty list stops
    the loop (the expert may skip areas deemed too small).  Leftover cases go
    to a majority-class fallback.
    """
    if d.n_cases == 0:
        return DecisionList((), Fallback("abstain"), d.attributes)
    if min_coverage is None:
        min_coverage = default_min_coverage(d)

    remaining = d
    rules: list = []
    iteration = 0
    while remaining.n_cases > 0:
        iteration += 1
        if max_iterations is not None and iteration > max_iterations:
            break
        candidates: list[IntervalRule] = []
        for a in range(remaining.n_attributes):
            candidates.extend(discover_pure_intervals(remaining, a, min_coverage, iteration))
        if not candidates:
            break
        accepted = prune_redundant(candidates, remaining)
        if interactive_hooks is not None:
            accepted = list(interactive_hooks(iteration, accepted, remaining))
            accepted.sort(key=_candidate_sort_key)
            if not accepted:
                break
        accepted = _restate_first_match(accepted, remaining)
        accepted = [r for r in accepted if r.coverage > 0]
        if not accepted:
            break
        rules.extend(accepted)
        covered_mask = np.zeros(remaining.n_cases, dtype=bool)
        for rule in accepted:
            covered_mask |= rule.covered_mask(remaining.cases)
        remaining = remove_covered(remaining, remaining.case_ids[covered_mask])

    if remaining.n_cases > 0:
        fallback = Fallback("majority_class", majority_label(remaining.labels))
    else:
        fallback = Fallback("abstain")
    return DecisionList(tuple(rules), fallback, d.attributes)


@dataclass(frozen=True)
class DTNode:
    """One level of the generalized tree: this iteration's pure rule leaves
    plus the else-branch that descends to the next iteration."""

    iteration: int
    leaves: tuple
    else_node: "DTNode | None"
    fallback: Fallback | None = None


@dataclass(frozen=True)
class GeneralizedDT:
    root: DTNode | None
    fallback: Fallback
    attributes: tuple[str, ...]

    def classify_one(self, case):
        node = self.root
        while node is not None:
            for rule in node.leaves:
                if rule.matches(case):
                    return rule.label
            node = node.else_node
        if self.fallback.kind == "abstain":
            return None
        return self.fallback.label

    def classify(self, X: np.ndarray) -> list:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        return [self.classify_one(row) for row in X]

    def to_text(self) -> str:
        lines = []
        node = self.root
        depth = 0
        while node is not None:
            pad = "  " * depth
            lines.append(f"{pad}iteration {node.iteration}:")
            for rule in node.leaves:
                lines.append(f"{pad}  [leaf] {rule.to_text()}")
            node = node.else_node
            if node is not None:
                lines.append(f"{pad}  else ->")
            depth += 1
        pad = "  " * depth
        if self.fallback.kind == "abstain":
            lines.append(f"{pad}[fallback] abstain")
        else:
            lines.append(f"{pad}[fallback] x is {self.fallback.label}")
        return "\n".join(lines)


def to_generalized_dt(dl: DecisionList) -> GeneralizedDT:
    """Render a decision list as a non-binary tree: each level holds one
    iteration's pure rules as leaves and chains to the next level through the
    else branch.  Traversal classifies exactly like the list."""
    by_iteration: dict[int, list] = {}
    for rule in dl.rules:
        by_iteration.setdefault(rule.iteration, []).append(rule)
    root: DTNode | None = None
    for it in sorted(by_iteration, reverse=True):
        root = DTNode(it, tuple(by_iteration[it]), root)
    return GeneralizedDT(root, dl.fallback, dl.attributes)
