"""Single-expert interactive session: carve rectangles, accept suggested
rules, train scorers, and undo — with a replayable action log.

State lives in immutable snapshots; every applied action pushes a new
snapshot, so undo restores the exact prior state by popping.  The revision
number increases with every applied action (undo included) and is used by the
service layer to reject stale writes.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .dataset import Dataset, majority_label, minmax_normalize
from .envelope import Envelope, build_modified_envelope
from .overlap import (
    Hyperblock,
    OverlapInterval,
    compute_overlap_hyperblock,
    compute_overlap_interval,
    find_misclassified,
)
from .rules import (
    BlockRule,
    DecisionList,
    Fallback,
    IntervalRule,
    discover_pure_intervals,
    default_min_coverage,
    prune_redundant,
)
from .scorers import LinearScorer, ScoreVector, score_dataset, train_fisher
from .serialize import jsonable

ACTION_TYPES = (
    "mark_rectangle",
    "accept_candidates",
    "reject_candidates",
    "merge_leftovers",
    "reorder_axes",
    "hide_class",
    "auto_suggest",
    "undo",
    "set_scorer",
    "finalize",
)


class SessionError(ValueError):
    """Raised when an action is invalid in the current session state."""


@dataclass(frozen=True)
class Snapshot:
    remaining_ids: tuple[int, ...]
    rules: tuple
    pending: tuple
    axis_order: tuple[str, ...]
    hidden_classes: frozenset
    iteration: int
    scorer: LinearScorer | None = None
    scores: ScoreVector | None = None
    interval: OverlapInterval | None = None
    hyperblock: Hyperblock | None = None
    envelope: Envelope | None = None
    fallback: Fallback | None = None
    finalized: bool = False


class Session:
    def __init__(self, raw: Dataset, normalize: bool = True, seed: int = 0, session_id: str = "s0"):
        self.id = session_id
        self.seed = int(seed)
        self.normalized = bool(normalize)
        self.raw = raw
        self.working = minmax_normalize(raw) if normalize else raw
        self.revision = 0
        self.action_log: list[dict] = []
        first = Snapshot(
            remaining_ids=tuple(int(i) for i in self.working.case_ids),
            rules=(),
            pending=(),
            axis_order=self.working.attributes,
            hidden_classes=frozenset(),
            iteration=0,
        )
        self._stack: list[Snapshot] = [first]

    # -- state access -------------------------------------------------------

    @property
    def snapshot(self) -> Snapshot:
        return self._stack[-1]

    def remaining_dataset(self) -> Dataset:
        snap = self.snapshot
        rows = self.working.rows_for_ids(snap.remaining_ids)
        return self.working.select_rows(rows)

    def state_json(self) -> dict:
        snap = self.snapshot
        return jsonable(
            {
                "session_id": self.id,
                "revision": self.revision,
                "seed": self.seed,
                "normalized": self.normalized,
                "n_cases": self.working.n_cases,
                "remaining_ids": sorted(snap.remaining_ids),
                "rules": [r.to_json() for r in snap.rules],
                "pending": [r.to_json() for r in snap.pending],
                "axis_order": list(snap.axis_order),
                "hidden_classes": sorted(snap.hidden_classes),
                "iteration": snap.iteration,
                "scorer": snap.scorer.to_json() if snap.scorer else None,
                "interval": snap.interval.to_json() if snap.interval else None,
                "fallback": snap.fallback.to_json() if snap.fallback else None,
                "finalized": snap.finalized,
            }
        )

    def decision_list(self) -> DecisionList:
        snap = self.snapshot
        fallback = snap.fallback
        if fallback is None:
            remaining = self.remaining_dataset()
            fallback = (
                Fallback("majority_class", majority_label(remaining.labels))
                if remaining.n_cases
                else Fallback("abstain")
            )
        return DecisionList(snap.rules, fallback, self.working.attributes)

    # -- action application -------------------------------------------------

    def apply(self, action: dict) -> dict:
        kind = action.get("type")
        if kind not in ACTION_TYPES:
            raise SessionError(f"unknown action type {kind!r}")
        handler = getattr(self, f"_do_{kind}")
        diff = handler(action)
        self.revision += 1
        self.action_log.append(action)
        diff["revision"] = self.revision
        return jsonable(diff)

    def _push(self, snap: Snapshot) -> None:
        self._stack.append(snap)

    def _do_undo(self, action: dict) -> dict:
        if len(self._stack) < 2:
            raise SessionError("nothing to undo")
        self._stack.pop()
        return {"undone": True, "remaining": len(self.snapshot.remaining_ids)}

    def _do_reorder_axes(self, action: dict) -> dict:
        order = tuple(action["order"])
        if sorted(order) != sorted(self.working.attributes):
            raise SessionError(f"axis order must be a permutation of {self.working.attributes}")
        self._push(replace(self.snapshot, axis_order=order))
        return {"axis_order": list(order)}

    def _do_hide_class(self, action: dict) -> dict:
        label = action["label"]
        hidden = set(self.snapshot.hidden_classes)
        if action.get("hidden", True):
            hidden.add(label)
        else:
            hidden.discard(label)
        self._push(replace(self.snapshot, hidden_classes=frozenset(hidden)))
        return {"hidden_classes": sorted(hidden)}

    def _do_mark_rectangle(self, action: dict) -> dict:
        snap = self.snapshot
        if snap.finalized:
            raise SessionError("session is finalized")
        ranges = action["ranges"]
        label = action["label"]
        if not ranges:
            raise SessionError("rectangle needs at least one attribute range")
        remaining = self.remaining_dataset()
        constraints = []
        for name, (lo, hi) in ranges.items():
            idx = self.working.attr_index(name)
            lo, hi = float(lo), float(hi)
            if lo > hi:
                raise SessionError(f"invalid range for {name!r}: {lo} > {hi}")
            constraints.append((idx, name, lo, hi))
        constraints.sort()

        mask = np.ones(remaining.n_cases, dtype=bool)
        for idx, _, lo, hi in constraints:
            col = remaining.cases[:, idx]
            mask &= (col >= lo) & (col <= hi)
        covered_ids = remaining.case_ids[mask]
        if len(covered_ids) == 0:
            raise SessionError("rectangle covers no remaining cases")
        offending = remaining.case_ids[mask & (remaining.labels != label)]
        if len(offending):
            raise SessionError(
                f"rectangle is not pure for {label!r}; offending case ids: "
                f"{sorted(int(i) for i in offending)}"
            )

        iteration = snap.iteration + 1
        coverage = int(mask.sum())
        class_total = int((remaining.labels == label).sum())
        common = dict(
            label=label,
            iteration=iteration,
            coverage=coverage,
            class_share=coverage / class_total if class_total else 0.0,
            dataset_share=coverage / remaining.n_cases,
        )
        if len(constraints) == 1:
            idx, name, lo, hi = constraints[0]
            rule = IntervalRule(attribute=idx, attribute_name=name, lo=lo, hi=hi, **common)
        else:
            rule = BlockRule(constraints=tuple(constraints), **common)

        kept = tuple(i for i in snap.remaining_ids if i not in set(int(c) for c in covered_ids))
        self._push(
            replace(
                snap,
                rules=snap.rules + (rule,),
                remaining_ids=kept,
                pending=(),
                iteration=iteration,
            )
        )
        return {
            "rules_added": [rule.to_json()],
            "cases_removed": sorted(int(i) for i in covered_ids),
            "remaining": len(kept),
        }

    def _do_auto_suggest(self, action: dict) -> dict:
        snap = self.snapshot
        if snap.finalized:
            raise SessionError("session is finalized")
        remaining = self.remaining_dataset()
        if remaining.n_cases == 0:
            self._push(replace(snap, pending=()))
            return {"candidates": []}
        min_cov = action.get("min_coverage") or default_min_coverage(remaining)
        candidates: list[IntervalRule] = []
        for a in range(remaining.n_attributes):
            candidates.extend(
                discover_pure_intervals(remaining, a, int(min_cov), snap.iteration + 1)
            )
        candidates = prune_redundant(candidates, remaining)
        self._push(replace(snap, pending=tuple(candidates)))
        return {"candidates": [c.to_json() for c in candidates]}

    def _do_accept_candidates(self, action: dict) -> dict:
        snap = self.snapshot
        ids = list(action["ids"])
        if not snap.pending:
            raise SessionError("no pending candidates; run auto_suggest first")
        bad = [i for i in ids if not 0 <= int(i) < len(snap.pending)]
        if bad:
            raise SessionError(f"unknown candidate ids: {bad}")
        chosen = [snap.pending[int(i)] for i in sorted(set(int(i) for i in ids))]
        if not chosen:
            raise SessionError("no candidates selected")
        remaining = self.remaining_dataset()
        iteration = snap.iteration + 1

        taken = np.zeros(remaining.n_cases, dtype=bool)
        accepted = []
        removed_ids: list[int] = []
        for rule in chosen:
            hit = rule.covered_mask(remaining.cases) & ~taken
            taken |= hit
            coverage = int(hit.sum())
            class_total = int((remaining.labels == rule.label).sum())
            accepted.append(
                replace(
                    rule,
                    iteration=iteration,
                    coverage=coverage,
                    class_share=coverage / class_total if class_total else 0.0,
                    dataset_share=coverage / remaining.n_cases,
                )
            )
        removed_ids = [int(i) for i in remaining.case_ids[taken]]
        kept = tuple(i for i in snap.remaining_ids if i not in set(removed_ids))
        self._push(
            replace(
                snap,
                rules=snap.rules + tuple(accepted),
                remaining_ids=kept,
                pending=(),
                iteration=iteration,
            )
        )
        return {
            "rules_added": [r.to_json() for r in accepted],
            "cases_removed": sorted(removed_ids),
            "remaining": len(kept),
        }

    def _do_reject_candidates(self, action: dict) -> dict:
        snap = self.snapshot
        ids = set(int(i) for i in action["ids"])
        bad = [i for i in ids if not 0 <= i < len(snap.pending)]
        if bad:
            raise SessionError(f"unknown candidate ids: {sorted(bad)}")
        pending = tuple(c for i, c in enumerate(snap.pending) if i not in ids)
        self._push(replace(snap, pending=pending))
        return {"candidates": [c.to_json() for c in pending]}

    def _do_merge_leftovers(self, action: dict) -> dict:
        snap = self.snapshot
        label = action["label"]
        remaining = self.remaining_dataset()
        merged = [int(i) for i in remaining.case_ids]
        self._push(
            replace(
                snap,
                remaining_ids=(),
                fallback=Fallback("user_merge", label),
                pending=(),
            )
        )
        return {"cases_merged": sorted(merged), "fallback": {"kind": "user_merge", "label": label}}

    def _do_set_scorer(self, action: dict) -> dict:
        snap = self.snapshot
        top, bottom = action["top"], action["bottom"]
        remaining = self.remaining_dataset()
        scorer = train_fisher(remaining, top, bottom)
        two_class = remaining.select_classes([top, bottom])
        scores = score_dataset(scorer, two_class)
        interval = compute_overlap_interval(
            scores, two_class.labels, scorer.threshold, top, bottom
        )
        mis = find_misclassified(scores, two_class.labels, scorer.threshold, top, bottom)
        hb = envelope = None
        if len(mis):
            hb = compute_overlap_hyperblock(two_class, mis)
            rows = two_class.rows_for_ids(mis)
            axis_idx = [self.working.attr_index(a) for a in snap.axis_order]
            env_lines = two_class.cases[rows][:, axis_idx]
            envelope = build_modified_envelope(env_lines, snap.axis_order)
        self._push(
            replace(
                snap,
                scorer=scorer,
                scores=scores,
                interval=interval,
                hyperblock=hb,
                envelope=envelope,
            )
        )
        return {
            "scorer": scorer.to_json(),
            "interval": interval.to_json(),
            "misclassified": [int(i) for i in mis],
        }

    def _do_finalize(self, action: dict) -> dict:
        snap = self.snapshot
        remaining = self.remaining_dataset()
        fallback = snap.fallback
        if fallback is None:
            fallback = (
                Fallback("majority_class", majority_label(remaining.labels))
                if remaining.n_cases
                else Fallback("abstain")
            )
        self._push(replace(snap, fallback=fallback, finalized=True))
        dl = DecisionList(snap.rules, fallback, self.working.attributes)
        return {"finalized": True, "decision_list": dl.to_json()}

    # -- replay -------------------------------------------------------------

    @classmethod
    def replay(cls, raw: Dataset, normalize: bool, seed: int, log, session_id: str = "replay") -> "Session":
        session = cls(raw, normalize=normalize, seed=seed, session_id=session_id)
        for action in log:
            session.apply(action)
        return session
