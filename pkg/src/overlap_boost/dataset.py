"""Tabular dataset container: CSV ingestion, min-max normalization, derived
features, and case-set filtering for iterative carve-and-remove workflows.

Datasets are immutable values: every operation returns a new ``Dataset`` and
the numpy buffers are write-protected, so instances are safe to share across
threads and to keep on undo stacks.  Case ids are assigned at load time and
survive filtering, which is what lets rules, scores, and sessions refer to the
same case across iterations.
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass

import numpy as np

TRIG_FUNCTIONS = ("sin", "cos", "tan")
FEATURE_KINDS = (
    "difference",
    "slope",
    "weighted_sum",
    "forward_difference",
    "backward_difference",
    "trig",
)


class DatasetError(ValueError):
    """Raised for malformed input data or invalid dataset operations."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class NormMeta:
    """Per-attribute (min, max) recorded by normalization, plus the indices of
    attributes that were constant (zero range) and were mapped to 0."""

    lo: np.ndarray
    hi: np.ndarray
    constant: tuple[int, ...] = ()

    def __post_init__(self):
        _frozen(self.lo)
        _frozen(self.hi)


@dataclass(frozen=True)
class Dataset:
    attributes: tuple[str, ...]
    cases: np.ndarray  # (n_cases, n_attributes) float64
    labels: np.ndarray  # (n_cases,) str
    case_ids: np.ndarray  # (n_cases,) int64
    norm_meta: NormMeta | None = None

    def __post_init__(self):
        cases = np.asarray(self.cases, dtype=np.float64)
        if cases.ndim != 2 or cases.shape[1] != len(self.attributes):
            raise DatasetError(
                f"case matrix shape {cases.shape} does not match "
                f"{len(self.attributes)} attributes"
            )
        if cases.size and not np.all(np.isfinite(cases)):
            raise DatasetError("case matrix contains non-finite values")
        ids = np.asarray(self.case_ids, dtype=np.int64)
        if len(np.unique(ids)) != len(ids):
            raise DatasetError("case ids are not unique")
        labels = np.asarray(self.labels)
        if labels.shape[0] != cases.shape[0] or ids.shape[0] != cases.shape[0]:
            raise DatasetError("labels/case_ids misaligned with case matrix")
        object.__setattr__(self, "cases", _frozen(cases))
        object.__setattr__(self, "labels", _frozen(labels))
        object.__setattr__(self, "case_ids", _frozen(ids))
        object.__setattr__(self, "attributes", tuple(self.attributes))

    @property
    def n_cases(self) -> int:
        return self.cases.shape[0]

    @property
    def n_attributes(self) -> int:
        return len(self.attributes)

    def attr_index(self, name: str) -> int:
        try:
            return self.attributes.index(name)
        except ValueError:
            raise DatasetError(f"unknown attribute {name!r}") from None

    def column(self, attribute: str | int) -> np.ndarray:
        idx = attribute if isinstance(attribute, int) else self.attr_index(attribute)
        return self.cases[:, idx]

    def class_names(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.labels.tolist())))

    def rows_for_ids(self, ids) -> np.ndarray:
        """Positional indices of the given case ids, in the dataset's order."""
        wanted = set(int(i) for i in ids)
        unknown = wanted - set(self.case_ids.tolist())
        if unknown:
            raise DatasetError(f"unknown case ids: {sorted(unknown)}")
        return np.flatnonzero(np.isin(self.case_ids, list(wanted)))

    def select_rows(self, rows: np.ndarray) -> "Dataset":
        return Dataset(
            self.attributes,
            self.cases[rows].copy(),
            self.labels[rows].copy(),
            self.case_ids[rows].copy(),
            self.norm_meta,
        )

    def select_classes(self, classes) -> "Dataset":
        mask = np.isin(self.labels, list(classes))
        return self.select_rows(np.flatnonzero(mask))

    def to_csv(self, stream, label_column: str = "class") -> None:
        """Write the dataset back out; numeric cells use shortest round-trip
        decimal form so re-importing reproduces values bit-exactly."""
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(list(self.attributes) + [label_column])
        for row, label in zip(self.cases, self.labels):
            writer.writerow([repr(float(v)) for v in row] + [str(label)])


def load_csv(source, label_column: str) -> Dataset:
    """Parse a CSV byte/text stream (or path) with a mandatory header row.

    All non-label columns must contain finite numbers; violations are rejected
    with the offending file row and column named.  Case ids are assigned
    0..n-1 in file order.
    """
    text = _read_text(source)
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DatasetError("empty input: missing header row") from None
    header = [h.strip() for h in header]
    if label_column not in header:
        raise DatasetError(f"label column {label_column!r} not found in header {header}")
    if len(set(header)) != len(header):
        raise DatasetError("duplicate column names in header")
    label_idx = header.index(label_column)
    attributes = tuple(h for i, h in enumerate(header) if i != label_idx)

    rows: list[list[float]] = []
    labels: list[str] = []
    for line_no, rec in enumerate(reader, start=2):
        if not rec:
            continue
        if len(rec) != len(header):
            raise DatasetError(
                f"row {line_no}: expected {len(header)} fields, got {len(rec)}"
            )
        vals = []
        for col, cell in zip(header, rec):
            if col == label_column:
                continue
            try:
                v = float(cell)
            except ValueError:
                raise DatasetError(
                    f"row {line_no}, column {col!r}: cannot parse {cell.strip()!r} as a number"
                ) from None
            if not math.isfinite(v):
                raise DatasetError(f"row {line_no}, column {col!r}: non-finite value {cell!r}")
            vals.append(v)
        rows.append(vals)
        labels.append(rec[label_idx].strip())

    n = len(rows)
    cases = np.array(rows, dtype=np.float64).reshape(n, len(attributes))
    return Dataset(
        attributes,
        cases,
        np.array(labels, dtype=object) if n else np.empty(0, dtype=object),
        np.arange(n, dtype=np.int64),
    )


def _read_text(source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if hasattr(source, "read"):
        data = source.read()
        return data.decode("utf-8") if isinstance(data, bytes) else data
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            return fh.read().decode("utf-8")
    raise DatasetError(f"unsupported CSV source type {type(source).__name__}")


def minmax_normalize(d: Dataset) -> Dataset:
    """Map every attribute to [0, 1] by its (min, max) over all cases of d.

    Constant attributes map to 0 and are flagged in the returned norm_meta so
    they are kept on every axis instead of being dropped.
    """
    if d.n_cases < 1:
        raise DatasetError("cannot normalize an empty dataset")
    lo = d.cases.min(axis=0)
    hi = d.cases.max(axis=0)
    span = hi - lo
    constant = tuple(int(i) for i in np.flatnonzero(span == 0.0))
    safe = np.where(span == 0.0, 1.0, span)
    scaled = (d.cases - lo) / safe
    scaled[:, list(constant)] = 0.0
    return Dataset(
        d.attributes,
        scaled,
        d.labels.copy(),
        d.case_ids.copy(),
        NormMeta(lo.copy(), hi.copy(), constant),
    )


def denormalize(d: Dataset) -> Dataset:
    """Invert minmax_normalize using the stored norm_meta."""
    if d.norm_meta is None:
        raise DatasetError("dataset has no normalization metadata")
    lo, hi = d.norm_meta.lo, d.norm_meta.hi
    raw = d.cases * (hi - lo) + lo
    for i in d.norm_meta.constant:
        raw[:, i] = lo[i]
    return Dataset(d.attributes, raw, d.labels.copy(), d.case_ids.copy(), None)


@dataclass(frozen=True)
class FeatureExpr:
    """A derived-column recipe over existing attributes.

    kind 'difference' and 'slope' take two operands; 'weighted_sum' takes one
    weight per operand; 'forward_difference'/'backward_difference' expand an
    operand chain of length k into k-1 columns; 'trig' applies the selected
    function to a single operand.
    """

    kind: str
    operands: tuple[int, ...]
    weights: tuple[float, ...] | None = None
    trig: str | None = None

    def __post_init__(self):
        if self.kind not in FEATURE_KINDS:
            raise DatasetError(f"unknown feature kind {self.kind!r}")
        object.__setattr__(self, "operands", tuple(int(i) for i in self.operands))
        if self.weights is not None:
            object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))

    def validate(self, d: Dataset) -> None:
        for i in self.operands:
            if not 0 <= i < d.n_attributes:
                raise DatasetError(f"operand index {i} out of range for {d.n_attributes} attributes")
        if self.kind in ("difference", "slope"):
            if len(self.operands) != 2:
                raise DatasetError(f"{self.kind} needs exactly two operands")
            if self.kind == "slope" and self.operands[0] == self.operands[1]:
                raise DatasetError("slope needs two distinct operands")
        elif self.kind == "weighted_sum":
            if self.weights is None or len(self.weights) != len(self.operands):
                raise DatasetError("weighted_sum needs one weight per operand")
        elif self.kind in ("forward_difference", "backward_difference"):
            if len(self.operands) < 2:
                raise DatasetError(f"{self.kind} needs at least two operands")
        elif self.kind == "trig":
            if len(self.operands) != 1:
                raise DatasetError("trig needs exactly one operand")
            if self.trig not in TRIG_FUNCTIONS:
                raise DatasetError(f"trig selector must be one of {TRIG_FUNCTIONS}")

    def columns(self, d: Dataset) -> list[tuple[str, np.ndarray]]:
        """Expand into (name, values) pairs; names are canonical renderings so
        rules that reference derived columns serialize stably."""
        self.validate(d)
        names = [d.attributes[i] for i in self.operands]
        if self.kind == "difference":
            i, j = self.operands
            return [(f"diff({names[0]},{names[1]})", d.cases[:, i] - d.cases[:, j])]
        if self.kind == "slope":
            i, j = self.operands
            rise = d.cases[:, j] - d.cases[:, i]
            return [(f"slope({names[0]},{names[1]})", rise / float(j - i))]
        if self.kind == "weighted_sum":
            vals = np.zeros(d.n_cases)
            parts = []
            for w, i, nm in zip(self.weights, self.operands, names):
                vals = vals + w * d.cases[:, i]
                parts.append(f"{w!r}*{nm}")
            return [("wsum(" + ",".join(parts) + ")", vals)]
        if self.kind == "forward_difference":
            out = []
            for a, b in zip(self.operands[:-1], self.operands[1:]):
                nm = f"fdiff({d.attributes[a]},{d.attributes[b]})"
                out.append((nm, d.cases[:, a] - d.cases[:, b]))
            return out
        if self.kind == "backward_difference":
            out = []
            for a, b in zip(self.operands[:-1], self.operands[1:]):
                nm = f"bdiff({d.attributes[b]},{d.attributes[a]})"
                out.append((nm, d.cases[:, b] - d.cases[:, a]))
            return out
        fn = getattr(np, self.trig)
        return [(f"{self.trig}({names[0]})", fn(d.cases[:, self.operands[0]]))]


def engineer_features(d: Dataset, exprs) -> Dataset:
    """Append derived columns; original columns are untouched bit-for-bit.

    On a normalized dataset each new column is min-max scaled by its own
    (min, max) at creation and that range is recorded in norm_meta, keeping
    every stored value in [0, 1].
    """
    new_cols: list[tuple[str, np.ndarray]] = []
    for expr in exprs:
        new_cols.extend(expr.columns(d))
    names = list(d.attributes)
    for nm, _ in new_cols:
        if nm in names:
            raise DatasetError(f"derived column name {nm!r} collides with an existing attribute")
        names.append(nm)

    matrix = [d.cases]
    norm_meta = d.norm_meta
    if norm_meta is None:
        matrix.extend(vals.reshape(-1, 1) for _, vals in new_cols)
    else:
        lo = list(norm_meta.lo)
        hi = list(norm_meta.hi)
        constant = list(norm_meta.constant)
        for offset, (_, vals) in enumerate(new_cols):
            cmin = float(vals.min()) if len(vals) else 0.0
            cmax = float(vals.max()) if len(vals) else 0.0
            if cmax == cmin:
                scaled = np.zeros_like(vals)
                constant.append(d.n_attributes + offset)
            else:
                scaled = (vals - cmin) / (cmax - cmin)
            lo.append(cmin)
            hi.append(cmax)
            matrix.append(scaled.reshape(-1, 1))
        norm_meta = NormMeta(np.array(lo), np.array(hi), tuple(constant))

    stacked = np.hstack(matrix) if d.n_cases else np.empty((0, len(names)))
    return Dataset(tuple(names), stacked, d.labels.copy(), d.case_ids.copy(), norm_meta)


def sort_attributes_by_correlation(d: Dataset) -> list[str]:
    """Greedy chain ordering: start at the attribute with the highest mean
    absolute Pearson correlation to the others, then repeatedly append the
    unplaced attribute most correlated (absolute) with the last placed one.
    Constant attributes participate with correlation 0; ties break toward the
    lower original index.
    """
    if d.n_cases < 2:
        raise DatasetError("attribute ordering needs at least two cases")
    k = d.n_attributes
    if k == 1:
        return [d.attributes[0]]
    std = d.cases.std(axis=0)
    C = np.zeros((k, k))
    with np.errstate(invalid="ignore", divide="ignore"):
        R = np.corrcoef(d.cases, rowvar=False)
    for i in range(k):
        for j in range(k):
            if i != j and std[i] > 0 and std[j] > 0:
                C[i, j] = abs(R[i, j])
    mean_abs = C.sum(axis=1) / (k - 1)
    start = int(np.argmax(mean_abs))  # argmax takes the first maximum: lowest index
    order = [start]
    remaining = [i for i in range(k) if i != start]
    while remaining:
        last = order[-1]
        best = max(remaining, key=lambda j: (C[last, j], -j))
        order.append(best)
        remaining.remove(best)
    return [d.attributes[i] for i in order]


def remove_covered(d: Dataset, covered) -> Dataset:
    """Drop the given case ids; the survivors keep their original ids."""
    covered = set(int(i) for i in covered)
    unknown = covered - set(d.case_ids.tolist())
    if unknown:
        raise DatasetError(f"cannot remove unknown case ids: {sorted(unknown)}")
    keep = np.flatnonzero(~np.isin(d.case_ids, list(covered))) if covered else np.arange(d.n_cases)
    return d.select_rows(keep)


def majority_label(labels: np.ndarray) -> str:
    """Most frequent label; ties break alphabetically for determinism."""
    values, counts = np.unique(labels, return_counts=True)
    best = counts.max()
    return str(sorted(v for v, c in zip(values, counts) if c == best)[0])
