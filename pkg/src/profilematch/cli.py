"""Command-line orchestration: synth -> ingest/features/folds -> train ->
evaluate/ablate. Every subcommand reads and writes the documented file
formats and exits non-zero with a diagnostic on any module error."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys

from profilematch import evaluate as ev
from profilematch import folds as fd
from profilematch import learn
from profilematch import synth as sy
from profilematch.errors import ProfileMatchError
from profilematch.features import FeatureMatrix, corpus_idf_table
from profilematch.profiles import load_corpus, load_reference_dir, save_corpus

logger = logging.getLogger("profilematch")

_MODEL_ALIASES = {"rf": "random_forest", "logitboost": "logitboost", "adaboost": "adaboost", "random_forest": "random_forest"}


def _learner_config(args) -> learn.LearnerConfig:
    kind = _MODEL_ALIASES[args.model]
    return learn.LearnerConfig(
        kind=kind,
        iterations=args.iterations,
        adaboost_iterations=args.adaboost_iterations,
        n_trees=args.trees,
        base_depth=args.depth,
        seed=args.seed,
        threshold=args.threshold,
    )


def _add_model_args(parser) -> None:
    parser.add_argument("--model", choices=sorted(_MODEL_ALIASES), default="logitboost")
    parser.add_argument("--iterations", type=int, default=25, help="LogitBoost rounds")
    parser.add_argument("--adaboost-iterations", type=int, default=200, help="AdaBoost rounds")
    parser.add_argument("--trees", type=int, default=150, help="random forest size")
    parser.add_argument("--depth", type=int, default=2, help="AdaBoost base tree depth")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threshold", type=float, default=0.5, help="decision threshold")


def cmd_synth(args) -> None:
    cfg = sy.SynthConfig.from_json_file(args.config) if args.config else sy.SynthConfig()
    if args.seed is not None:
        cfg = sy.SynthConfig.from_dict({**cfg.to_dict(), "seed": args.seed})
    s1, s2, positives, ref = sy.generate_corpora(cfg)
    paths = sy.write_corpus_files(args.out, s1, s2, positives, ref, cfg)
    logger.info(
        "wrote %d + %d profiles, %d positives to %s",
        len(s1), len(s2), len(positives), args.out,
    )
    print(json.dumps({k: os.path.basename(v) for k, v in sorted(paths.items())}))


def cmd_ingest(args) -> None:
    corpus = load_corpus(getattr(args, "in"), args.network)
    if args.out:
        save_corpus(corpus, args.out)
    print(f"{corpus.network}: {len(corpus)} profiles ok")


def _read_pairs_file(path) -> list[tuple[str, str, int]]:
    """id1,id2[,label] rows; a missing label column means match."""
    triples = []
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or not "".join(row).strip():
                continue
            if lineno == 1 and [c.strip().lower() for c in row[:2]] == ["id1", "id2"]:
                continue
            if len(row) == 2:
                triples.append((row[0], row[1], 1))
            elif len(row) >= 3:
                triples.append((row[0], row[1], int(row[2])))
            else:
                raise ProfileMatchError(f"{path}:{lineno}: expected id1,id2[,label]")
    return triples


def cmd_features(args) -> None:
    s1 = load_corpus(args.s1, "S1")
    s2 = load_corpus(args.s2, "S2")
    ref = load_reference_dir(args.ref)
    triples = _read_pairs_file(args.pairs)
    matrix = FeatureMatrix.from_pairs(
        triples, s1, s2, ref, corpus_idf_table(s1), corpus_idf_table(s2)
    )
    matrix.to_csv(args.out)
    logger.info("wrote %d feature rows to %s", len(matrix), args.out)


def cmd_folds(args) -> None:
    s1 = load_corpus(args.s1, "S1")
    s2 = load_corpus(args.s2, "S2")
    ref = load_reference_dir(args.ref)
    positives = fd.read_positive_pairs(args.positives)
    foldset, report = fd.build_foldset(
        s1, s2, positives, k=args.k, n_per_side=args.negatives_per_side, seed=args.seed
    )
    fold_data = fd.extract_fold_features(foldset, s1, s2, ref)
    manifest_path = fd.write_fold_manifest(args.out, foldset, fold_data, report)
    logger.info(
        "retained %d/%d positives (%d cross-group discarded), %d negatives",
        report.n_retained, report.n_positives_input,
        report.n_discarded_cross_group, report.n_negatives,
    )
    print(manifest_path)


def cmd_train(args) -> None:
    matrix = FeatureMatrix.from_csv(args.train)
    config = _learner_config(args)
    model = learn.train_model(matrix.learning_matrix(), matrix.labels, config)
    learn.save_model(model, args.out)
    logger.info("trained %s on %d rows -> %s", config.kind, len(matrix), args.out)


def cmd_evaluate(args) -> None:
    fold_data, _ = fd.read_fold_manifest(args.folds)
    config = _learner_config(args)
    report = ev.run_scenario(fold_data, config, args.scenario)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(report.to_json())
        fh.write("\n")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["fold", "auc", "accuracy", "tpr", "fpr"])
            for fm in report.per_fold:
                writer.writerow([fm.fold, fm.auc, fm.accuracy, fm.tpr, fm.fpr])
    if args.roc_dir:
        _write_roc_curves(args.roc_dir, fold_data, config, args.scenario)
    for fm in report.per_fold:
        print(
            f"fold {fm.fold}: auc={fm.auc:.4f} accuracy={fm.accuracy:.4f} "
            f"tpr={fm.tpr if fm.tpr is not None else 'n/a'} "
            f"fpr={fm.fpr if fm.fpr is not None else 'n/a'}"
        )
    print(
        f"scenario {args.scenario} mean: auc={report.mean('auc'):.4f} "
        f"accuracy={report.mean('accuracy'):.4f}"
    )


def _write_roc_curves(roc_dir, fold_data, config, scenario) -> None:
    from profilematch.features import ALL_FEATURES, NO_NAME_FEATURES

    os.makedirs(roc_dir, exist_ok=True)
    subset = NO_NAME_FEATURES if scenario == "C" else ALL_FEATURES
    for fold in fold_data:
        labels = fold.test.labels
        values = fold.test.learning_matrix()
        if scenario == "B":
            mask = fold.test.values[:, 0] == 1.0
            labels = labels[mask]
            values = values[mask]
        if (labels == 1).sum() == 0 or (labels == 0).sum() == 0:
            continue
        model = learn.train_model(
            fold.train.learning_matrix(), fold.train.labels, config,
            subset=subset, seed=config.seed + fold.index,
        )
        scores = model.predict_proba_batch(values)
        points = ev.roc_points(scores, labels)
        path = os.path.join(roc_dir, f"roc_fold{fold.index:02d}.csv")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["fpr", "tpr"])
            writer.writerows(points)


def cmd_ablate(args) -> None:
    fold_data, _ = fd.read_fold_manifest(args.folds)
    config = _learner_config(args)
    mode = args.mode.replace("-", "_")
    report = ev.ablation(fold_data, config, mode)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(report.to_json())
        fh.write("\n")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["index", "feature", "mean_auc"])
            for entry in report.to_dict()["per_feature"]:
                writer.writerow([entry["index"], entry["feature"], entry["mean_auc"]])
    for entry in report.to_dict()["per_feature"]:
        print(f"{entry['feature']}: {entry['mean_auc']:.4f}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="profilematch",
        description="Match user profiles across two social networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic two-network corpus")
    p.add_argument("--config", help="SynthConfig JSON file (defaults used when omitted)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("ingest", help="validate (and optionally re-serialize) a profile file")
    p.add_argument("--in", required=True, help="JSONL profile file")
    p.add_argument("--network", choices=("S1", "S2"), required=True)
    p.add_argument("--out", help="write the normalized corpus here")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("features", help="extract the 27-feature matrix for listed pairs")
    p.add_argument("--s1", required=True)
    p.add_argument("--s2", required=True)
    p.add_argument("--ref", required=True, help="directory with name_frequency.tsv and gazetteer.csv")
    p.add_argument("--pairs", required=True, help="CSV id1,id2[,label]")
    p.add_argument("--out", required=True, help="feature matrix CSV")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("folds", help="build the leakage-free folds with features")
    p.add_argument("--s1", required=True)
    p.add_argument("--s2", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--positives", required=True, help="CSV id1,id2 of ground-truth matches")
    p.add_argument("--out", required=True, help="output directory for fold CSVs + manifest")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--negatives-per-side", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_folds)

    p = sub.add_parser("train", help="train one model on a feature matrix CSV")
    p.add_argument("--train", required=True, help="feature matrix CSV")
    p.add_argument("--out", required=True, help="model JSON path")
    _add_model_args(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="run a matching scenario over built folds")
    p.add_argument("--folds", required=True, help="fold manifest JSON")
    p.add_argument("--scenario", choices=ev.SCENARIOS, required=True)
    p.add_argument("--out", required=True, help="EvalReport JSON path")
    p.add_argument("--csv", help="also write per-fold metrics CSV")
    p.add_argument("--roc-dir", help="also write per-fold ROC point CSVs")
    _add_model_args(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("ablate", help="run the all-but-x / only-x feature analysis")
    p.add_argument("--folds", required=True, help="fold manifest JSON")
    p.add_argument("--mode", choices=("all-but-x", "only-x"), required=True)
    p.add_argument("--out", required=True, help="AblationReport JSON path")
    p.add_argument("--csv", help="also write the report as CSV")
    _add_model_args(p)
    p.set_defaults(func=cmd_ablate)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (ProfileMatchError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
