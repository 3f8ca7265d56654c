"""Command-line driver for the batch pipelines and the session service.

Every command is deterministic given --seed: artifacts are canonical JSON /
CSV with no timestamps, so repeated runs compare byte-identical.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .boost import compose_boosted
from .dataset import Dataset, DatasetError, load_csv, minmax_normalize
from .envelope import build_modified_envelope
from .overlap import (
    compute_overlap_hyperblock,
    compute_overlap_interval,
    find_misclassified,
    overlap_bundle_json,
)
from .rules import dnc_run, to_generalized_dt
from .scorers import TrainingError, score_dataset, train_fisher, train_weighted_overlap
from .serialize import write_artifact
from .synth import PureRegion, evaluate_overlap, generate_synthetic, pure_area_evidence


def _add_data_args(p: argparse.ArgumentParser, classes_required: bool = False):
    p.add_argument("--data", required=True, help="CSV file with a header row")
    p.add_argument("--label", required=True, help="name of the label column")
    p.add_argument(
        "--classes",
        required=classes_required,
        help="comma-separated pair top,bottom restricting to a two-class task",
    )
    p.add_argument("--normalize", action="store_true", help="min-max normalize all attributes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=".", help="output directory for artifacts")


def _load(args) -> tuple[Dataset, tuple[str, str] | None]:
    d = load_csv(args.data, args.label)
    pair = None
    if args.classes:
        names = [c.strip() for c in args.classes.split(",")]
        if len(names) != 2:
            raise DatasetError(f"--classes needs exactly two names, got {names}")
        d = d.select_classes(names)
        pair = (names[0], names[1])
    if args.normalize:
        d = minmax_normalize(d)
    return d, pair


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _train_pipeline(d: Dataset, pair):
    top, bottom = pair
    scorer = train_fisher(d, top, bottom)
    two = d.select_classes([top, bottom])
    scores = score_dataset(scorer, two)
    return scorer, two, scores


def _write_scores_csv(path: Path, scores):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("case_id,score\n")
        for cid, v in zip(scores.case_ids, scores.values):
            fh.write(f"{int(cid)},{float(v)!r}\n")


def cmd_train(args) -> int:
    d, pair = _load(args)
    scorer, _, scores = _train_pipeline(d, pair)
    out = _outdir(args)
    write_artifact(out / "scorer.json", scorer.to_json())
    _write_scores_csv(out / "scores.csv", scores)
    print(f"trained scorer on {pair[0]} vs {pair[1]}: threshold {scorer.threshold!r}")
    print(f"wrote {out / 'scorer.json'} and {out / 'scores.csv'}")
    return 0


def _overlap_pipeline(d: Dataset, pair, axis_order=None):
    scorer, two, scores = _train_pipeline(d, pair)
    top, bottom = pair
    interval = compute_overlap_interval(scores, two.labels, scorer.threshold, top, bottom)
    mis = find_misclassified(scores, two.labels, scorer.threshold, top, bottom)
    hb = envelope = None
    if len(mis):
        hb = compute_overlap_hyperblock(two, mis)
        order = axis_order or two.attributes
        idx = [two.attr_index(a) for a in order]
        envelope = build_modified_envelope(two.cases[two.rows_for_ids(mis)][:, idx], order)
    return scorer, two, scores, interval, mis, hb, envelope


def cmd_overlap(args) -> int:
    d, pair = _load(args)
    scorer, _, _, interval, mis, hb, envelope = _overlap_pipeline(d, pair)
    out = _outdir(args)
    bundle = overlap_bundle_json(scorer, interval, hb, envelope.to_json() if envelope else None)
    bundle["misclassified"] = [int(i) for i in mis]
    write_artifact(out / "overlap.json", bundle)
    if interval.empty:
        print("no misclassified cases: overlap interval is empty")
    else:
        print(f"overlap interval [{interval.a!r}, {interval.b!r}] with {len(mis)} misclassified cases")
    print(f"wrote {out / 'overlap.json'}")
    return 0


def cmd_boost(args) -> int:
    d, pair = _load(args)
    top, bottom = pair
    w1, w2 = _parse_weights(args.weights)
    scorer, two, scores, interval, mis, hb, _ = _overlap_pipeline(d, pair)
    out = _outdir(args)

    if interval.empty:
        boosted = compose_boosted(scorer, None, interval)
    else:
        in_overlap = interval.contains(scores.values)
        overlap_ids = scores.case_ids[in_overlap]
        overlap_cases = two.select_rows(two.rows_for_ids(overlap_ids))
        f2 = train_weighted_overlap(overlap_cases, set(int(i) for i in mis), w1, w2, full=two)
        boosted = compose_boosted(scorer, f2, interval)

    predictions = np.asarray(boosted.classify(two.cases))
    overall_acc = float((predictions == two.labels).mean())
    report = {
        "overall_accuracy": overall_acc,
        "n_parameters": boosted.n_parameters,
        "cases_per_parameter": two.n_cases / boosted.n_parameters,
        "misclassified_before": [int(i) for i in mis],
    }
    if not interval.empty:
        base_eval = evaluate_overlap(scorer, overlap_cases, interval, (w1, w2), set(int(i) for i in mis))
        boosted_eval = evaluate_overlap(boosted, overlap_cases, interval, (w1, w2), set(int(i) for i in mis))
        report["overlap_accuracy_before"] = base_eval.accuracy
        report["overlap_accuracy_after"] = boosted_eval.accuracy
        report["overlap_eval"] = boosted_eval.to_json()
    write_artifact(out / "boosted.json", boosted.to_json())
    write_artifact(out / "boost_report.json", report)
    print(f"boosted training accuracy {overall_acc!r} with {boosted.n_parameters} parameters")
    print(f"wrote {out / 'boosted.json'} and {out / 'boost_report.json'}")
    return 0


def cmd_dnc(args) -> int:
    d, _ = _load(args)
    dl = dnc_run(d, min_coverage=args.min_coverage, max_iterations=args.max_iterations)
    out = _outdir(args)
    write_artifact(out / "decision_list.json", dl.to_json())
    (out / "rules.txt").write_text(dl.to_text() + "\n", encoding="utf-8")
    tree = to_generalized_dt(dl)
    (out / "generalized_dt.txt").write_text(tree.to_text() + "\n", encoding="utf-8")
    n_classified = sum(1 for c in dl.classify(d.cases) if c is not None)
    print(f"decision list with {len(dl.rules)} rules covering {n_classified}/{d.n_cases} cases")
    print(f"wrote {out / 'decision_list.json'}, {out / 'rules.txt'}, {out / 'generalized_dt.txt'}")
    return 0


def cmd_synth(args) -> int:
    d, pair = _load(args)
    scorer, two, scores, interval, mis, hb, _ = _overlap_pipeline(d, pair)
    out = _outdir(args)
    if args.mode in ("uniform_hb", "gaussian_center"):
        if hb is None:
            raise DatasetError("no misclassified cases: no overlap hyperblock to sample")
        region = hb
    else:
        outside = ~interval.contains(scores.values) if not interval.empty else np.ones(two.n_cases, bool)
        members = two.cases[outside]
        region = PureRegion(members, two.attributes)
    batch = generate_synthetic(region, args.mode, args.n, args.seed)
    with open(out / "synthetic.csv", "w", encoding="utf-8") as fh:
        batch.to_csv(fh)
    print(f"generated {args.n} cases ({args.mode}, seed {args.seed}) into {out / 'synthetic.csv'}")
    return 0


def cmd_eval(args) -> int:
    d, pair = _load(args)
    w1, w2 = _parse_weights(args.weights)
    scorer, two, scores, interval, mis, hb, _ = _overlap_pipeline(d, pair)
    out = _outdir(args)
    if interval.empty:
        raise DatasetError("no overlap area to evaluate: scorer has no misclassified cases")
    in_overlap = interval.contains(scores.values)
    overlap_cases = two.select_rows(two.rows_for_ids(scores.case_ids[in_overlap]))
    report = evaluate_overlap(scorer, overlap_cases, interval, (w1, w2), set(int(i) for i in mis))
    payload = report.to_json()
    payload["interval"] = interval.to_json()
    payload["whole_data_accuracy"] = float((scorer.classify(two.cases) == two.labels).mean())
    if args.synthetic:
        import csv as _csv

        with open(args.synthetic, "r", encoding="utf-8") as fh:
            rows = [r for r in _csv.reader(line for line in fh if not line.startswith("#")) if r]
        cases = np.array([[float(v) for v in r] for r in rows[1:]], dtype=np.float64)
        batch_like = type("Batch", (), {"cases": cases})()
        real_fraction = float(np.mean(in_overlap))
        evidence = pure_area_evidence(scorer, batch_like, interval, real_fraction)
        payload["pure_area_evidence"] = evidence.to_json()
    write_artifact(out / "eval_report.json", payload)
    print(f"overlap accuracy {report.accuracy!r} over {report.n_overlap} cases")
    print(f"wrote {out / 'eval_report.json'}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import SessionRegistry, create_app
    from .session import Session

    registry = SessionRegistry()
    if args.data:
        raw = load_csv(args.data, args.label)
        session = Session(raw, normalize=args.normalize, seed=args.seed, session_id="default")
        registry.add(session)
        print(f"preloaded session 'default' with {raw.n_cases} cases from {args.data}")
    port = args.port or int(os.environ.get("OVERLAP_BOOST_PORT", "8600"))
    app = create_app(registry)
    uvicorn.run(app, host=args.host, port=port, log_level="warning")
    return 0


def _parse_weights(text: str) -> tuple[float, float]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise DatasetError(f"--weights needs w1,w2 with w1 > w2 > 0, got {text!r}")
    return float(parts[0]), float(parts[1])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="overlap-boost",
        description="class-overlap analysis and boosting for linear scorers on tabular data",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fit a two-class scorer, emit scorer JSON + scored CSV")
    _add_data_args(p, classes_required=True)
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("overlap", help="emit overlap interval / hyperblock / envelope JSON")
    _add_data_args(p, classes_required=True)
    p.set_defaults(fn=cmd_overlap)

    p = sub.add_parser("boost", help="train the overlap scorer and emit the boosted model + report")
    _add_data_args(p, classes_required=True)
    p.add_argument("--weights", default="2,1", help="w1,w2 for the two-level weighted accuracy")
    p.set_defaults(fn=cmd_boost)

    p = sub.add_parser("dnc", help="automatic divide-and-classify decision list")
    _add_data_args(p)
    p.add_argument("--min-coverage", type=int, default=None)
    p.add_argument("--max-iterations", type=int, default=None)
    p.set_defaults(fn=cmd_dnc)

    p = sub.add_parser("synth", help="generate seeded synthetic cases from the overlap region")
    _add_data_args(p, classes_required=True)
    p.add_argument("--mode", choices=["uniform_hb", "gaussian_center", "marginal_pure"], default="uniform_hb")
    p.add_argument("--n", type=int, default=25)
    p.set_defaults(fn=cmd_synth)

    p = sub.add_parser("eval", help="evaluate the scorer on its overlap area")
    _add_data_args(p, classes_required=True)
    p.add_argument("--weights", default="2,1")
    p.add_argument("--synthetic", default=None, help="synthetic CSV to run the pure-area evidence test")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("serve", help="start the HTTP session service")
    p.add_argument("--data", default=None)
    p.add_argument("--label", default="class")
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=None, help="defaults to $OVERLAP_BOOST_PORT or 8600")
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (DatasetError, TrainingError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
