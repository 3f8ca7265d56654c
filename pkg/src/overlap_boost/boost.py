"""Two-stage boosted model: the base scorer decides outside its overlap
interval, a second scorer takes over inside it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .overlap import OverlapInterval
from .scorers import LinearScorer


@dataclass(frozen=True)
class BoostedModel:
    f1: LinearScorer
    f2: LinearScorer | None
    interval: OverlapInterval
    passthrough: bool = False  # empty interval: f2 is never consulted

    @property
    def n_parameters(self) -> int:
        n = self.f1.n_parameters
        if self.f2 is not None and not self.passthrough:
            n += self.f2.n_parameters
        return n

    def score(self, X: np.ndarray) -> np.ndarray:
        return self.f1.score(X)

    def classify(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        s = self.f1.score(X)
        base = np.where(s > self.f1.threshold, self.f1.top_class, self.f1.bottom_class)
        if self.passthrough or self.f2 is None:
            return base
        inside = np.asarray(self.interval.contains(s))
        if inside.any():
            base[inside] = self.f2.classify(X[inside])
        return base

    def classify_one(self, case) -> str:
        return str(self.classify(np.asarray(case).reshape(1, -1))[0])

    def to_json(self) -> dict:
        return {
            "f1": self.f1.to_json(),
            "f2": self.f2.to_json() if self.f2 is not None else None,
            "interval": self.interval.to_json(),
            "passthrough": self.passthrough,
            "n_parameters": self.n_parameters,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BoostedModel":
        return cls(
            LinearScorer.from_json(obj["f1"]),
            LinearScorer.from_json(obj["f2"]) if obj.get("f2") else None,
            OverlapInterval.from_json(obj["interval"]),
            bool(obj.get("passthrough", False)),
        )


def compose_boosted(f1: LinearScorer, f2: LinearScorer | None, interval: OverlapInterval) -> BoostedModel:
    """Dispatching model: f1's score routes each case either to f1's own
    threshold decision (score outside the closed interval) or to f2 (inside).
    An empty interval degenerates to f1 alone and is flagged passthrough."""
    if interval.empty:
        return BoostedModel(f1, f2, interval, passthrough=True)
    if f2 is None:
        raise ValueError("non-empty overlap interval needs a second-stage scorer")
    if len(f2.coefficients) != len(f1.coefficients):
        raise ValueError("f1 and f2 coefficient dimensions differ")
    return BoostedModel(f1, f2, interval)


def predict_boosted(model: BoostedModel, case) -> str:
    """Single-case dispatch; scores exactly on the interval boundary route to f2."""
    return model.classify_one(case)
