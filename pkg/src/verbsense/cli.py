"""Command-line interface for the disambiguation pipeline.

Subcommands: build-senses, fit-cca, disambiguate, train-supervised,
evaluate. Every run logs the sha256 of each input resource, the seed, and
the effective configuration, so outputs can be reproduced byte-identically.
Exit codes: 0 success, 1 resource error, 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

import numpy as np

from . import cca as cca_mod
from .disambig import (
    DisambigResources,
    Disambiguator,
    write_predictions,
)
from .embeddings import load_embeddings
from .errors import VerbsenseError
from .evaluation import (
    DEFAULT_CELLS,
    accuracy,
    format_report,
    grid_cells,
    load_dataset,
    run_grid,
)
from .features import FeatureStore, load_manifest, read_feature_file, write_feature_file
from .imagerep import RepConfig
from .inventory import load_inventory, senses
from .senserep import build_text_sense_rep, build_visual_sense_rep
from .supervised import (
    predict_lr,
    save_lr_model,
    select_supervised_verbs,
    split_train_test,
    train_lr,
)


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _log_resources(args, names) -> None:
    for name in names:
        path = getattr(args, name.replace("-", "_"), None)
        if path:
            print(f"resource {name}: {path} sha256={_sha256(path)[:16]}")


def _log_config(**kv) -> None:
    print("config " + json.dumps(kv, sort_keys=True))


def _add_common_rep_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--setting", choices=("gold", "pred"), default="gold")
    p.add_argument("--lambda-t", type=float, default=None, dest="lambda_t")
    p.add_argument("--lambda-c", type=float, default=None, dest="lambda_c")
    p.add_argument("--threshold", type=float, default=0.2,
                   help="predicted-object score threshold (strict >)")
    p.add_argument("--all-senses", action="store_true",
                   help="consider non-depictable senses as candidates too")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="verbsense",
        description="Visual verb sense disambiguation pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-senses", help="export per-sense representation vectors")
    p.add_argument("--inventory", required=True)
    p.add_argument("--embeddings", required=True)
    p.add_argument("--sense-manifest")
    p.add_argument("--sense-features")
    p.add_argument("--out-text", required=True)
    p.add_argument("--out-visual")
    p.add_argument("--all-senses", action="store_true")

    p = sub.add_parser("fit-cca", help="fit a CCA model on two paired VSDF views")
    p.add_argument("--text-view", required=True)
    p.add_argument("--visual-view", required=True)
    p.add_argument("--n", type=int, default=128, help="latent dimensionality")
    p.add_argument("--ridge", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("disambiguate", help="predict senses for dataset images")
    p.add_argument("--inventory", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--embeddings")
    p.add_argument("--features")
    p.add_argument("--sense-manifest")
    p.add_argument("--sense-features")
    p.add_argument("--cca-model")
    p.add_argument("--channel", default="C")
    p.add_argument("--fusion", choices=("none", "concat", "cca"), default=None)
    p.add_argument("--image", help="predict a single image id and print its scores")
    p.add_argument("--verb", help="sanity-check the paired verb of --image")
    p.add_argument("--out", help="write predictions JSONL here")
    _add_common_rep_flags(p)

    p = sub.add_parser("train-supervised", help="train per-verb sense classifiers")
    p.add_argument("--inventory", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--embeddings")
    p.add_argument("--features")
    p.add_argument("--channel", default="O+C")
    p.add_argument("--ratio", type=float, default=0.8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--l2", type=float, default=1e-3)
    p.add_argument("--epochs", type=int, default=500)
    p.add_argument("--lr", type=float, default=0.1)
    p.add_argument("--min-images", type=int, default=20)
    p.add_argument("--models-dir")
    p.add_argument("--report")
    _add_common_rep_flags(p)

    p = sub.add_parser("evaluate", help="run the accuracy grid and baselines")
    p.add_argument("--inventory", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--embeddings")
    p.add_argument("--features")
    p.add_argument("--sense-manifest")
    p.add_argument("--sense-features")
    p.add_argument("--cca-model")
    p.add_argument("--channels", default=None,
                   help="comma list, e.g. O,C,O+C,CNN,CNN+O (default: full grid)")
    p.add_argument("--fusions", default="concat,cca")
    p.add_argument("--verb-class", choices=("motion", "nonmotion", "all"), default="all")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--report", help="write the report JSON here")
    _add_common_rep_flags(p)

    return parser


def _load_resources(args) -> DisambigResources:
    return DisambigResources(
        table=load_embeddings(args.embeddings) if getattr(args, "embeddings", None) else None,
        image_features=read_feature_file(args.features)
        if getattr(args, "features", None)
        else None,
        sense_manifest=load_manifest(args.sense_manifest)
        if getattr(args, "sense_manifest", None)
        else None,
        sense_features=read_feature_file(args.sense_features)
        if getattr(args, "sense_features", None)
        else None,
        cca_model=cca_mod.load_cca_model(args.cca_model)
        if getattr(args, "cca_model", None)
        else None,
    )


def _cmd_build_senses(args) -> int:
    _log_resources(args, ["inventory", "embeddings", "sense-manifest", "sense-features"])
    inv = load_inventory(args.inventory)
    table = load_embeddings(args.embeddings)
    depictable_only = not args.all_senses
    text_entries = {}
    skipped = []
    for verb in sorted(inv.verbs):
        for sense in senses(inv, verb, depictable_only=depictable_only):
            try:
                text_entries[sense.sense_id] = build_text_sense_rep(sense, table)
            except VerbsenseError as e:
                skipped.append((sense.sense_id, str(e)))
    if not text_entries:
        raise VerbsenseError("no sense had embedding coverage; nothing to write")
    store = FeatureStore.from_entries(table.dim, text_entries)
    write_feature_file(store, args.out_text)
    print(f"wrote {len(text_entries)} text sense vectors (dim {table.dim}) to {args.out_text}")
    for sense_id, why in skipped:
        print(f"skipped {sense_id}: {why}")
    if args.out_visual:
        if not (args.sense_manifest and args.sense_features):
            raise VerbsenseError("--out-visual needs --sense-manifest and --sense-features")
        manifest = load_manifest(args.sense_manifest)
        feats = read_feature_file(args.sense_features)
        visual_entries = {}
        for sense_id, keys in sorted(manifest.items()):
            visual_entries[sense_id] = build_visual_sense_rep(sense_id, manifest, feats)
            print(f"sense {sense_id}: pooled {len(keys)} prototype images")
        write_feature_file(FeatureStore.from_entries(feats.dim, visual_entries), args.out_visual)
        print(
            f"wrote {len(visual_entries)} visual sense vectors (dim {feats.dim}) "
            f"to {args.out_visual}"
        )
    return 0


def _mean_projected_correlation(model, X, Y) -> float:
    pt = (X - model.mean_t) @ model.proj_t
    pc = (Y - model.mean_c) @ model.proj_c
    corrs = []
    for k in range(model.n):
        a, b = pt[:, k], pc[:, k]
        sa, sb = a.std(), b.std()
        if sa == 0 or sb == 0:
            corrs.append(0.0)
            continue
        corrs.append(float(np.mean((a - a.mean()) * (b - b.mean())) / (sa * sb)))
    return float(np.mean(corrs))


def _cmd_fit_cca(args) -> int:
    _log_resources(args, ["text-view", "visual-view"])
    _log_config(n=args.n, ridge=args.ridge, seed=args.seed)
    text = read_feature_file(args.text_view)
    visual = read_feature_file(args.visual_view)
    if set(text.entries) != set(visual.entries):
        raise VerbsenseError("text and visual views must have identical key sets")
    train, dev, test = cca_mod.split_keys(text.entries, seed=args.seed)
    model = cca_mod.fit_cca(
        [(text.vector(k), visual.vector(k)) for k in train],
        n=args.n,
        ridge=args.ridge,
        seed=args.seed,
    )
    cca_mod.save_cca_model(model, args.out)
    print(f"fit on {len(train)} pairs; top correlations: "
          + " ".join(f"{c:.4f}" for c in model.correlations[: min(5, model.n)]))
    for name, keys in (("train", train), ("dev", dev), ("test", test)):
        if keys:
            X = np.vstack([text.vector(k) for k in keys]).astype(np.float64)
            Y = np.vstack([visual.vector(k) for k in keys]).astype(np.float64)
            print(f"{name}: mean projected correlation "
                  f"{_mean_projected_correlation(model, X, Y):.4f} over {len(keys)} pairs")
    print(f"wrote model to {args.out}")
    return 0


def _make_config(args, channel, fusion=None) -> RepConfig:
    if fusion is None:
        fusion = "none" if channel in ("O", "C", "O+C", "CNN") else "concat"
    return RepConfig(
        channel=channel,
        setting=args.setting,
        fusion=fusion,
        lambda_t=args.lambda_t,
        lambda_c=args.lambda_c,
        pred_threshold=args.threshold,
        depictable_only=not args.all_senses,
    )


def _cmd_disambiguate(args) -> int:
    _log_resources(
        args,
        ["inventory", "dataset", "embeddings", "features", "sense-manifest",
         "sense-features", "cca-model"],
    )
    inv = load_inventory(args.inventory)
    records = load_dataset(args.dataset, inv)
    cfg = _make_config(args, args.channel, args.fusion)
    _log_config(channel=cfg.channel, setting=cfg.setting, fusion=cfg.fusion,
                lambda_t=cfg.lambda_t, lambda_c=cfg.lambda_c,
                threshold=cfg.pred_threshold)
    disambiguator = Disambiguator(inv, cfg, _load_resources(args))
    if args.image:
        matches = [r for r in records if r.image_id == args.image]
        if not matches:
            raise VerbsenseError(f"image '{args.image}' not in dataset")
        rec = matches[0]
        if args.verb and rec.verb != args.verb:
            raise VerbsenseError(
                f"image '{args.image}' is paired with verb '{rec.verb}', not '{args.verb}'"
            )
        pred = disambiguator.predict(rec)
        print(f"image {rec.image_id} verb {rec.verb}: predicted {pred.predicted_sense_id}"
              + (f" (fallback: {pred.fallback})" if pred.fallback else ""))
        for sense_id, score in pred.scores.items():
            print(f"  {sense_id}: {score:.4f}")
        return 0
    preds = [disambiguator.predict(rec) for rec in records]
    gold = {r.image_id: r.gold_sense_id for r in records}
    print(f"predicted {len(preds)} images; accuracy {accuracy(preds, gold):.4f}; "
          f"fallbacks {sum(p.fallback is not None for p in preds)}")
    if args.out:
        write_predictions(preds, args.out)
        print(f"wrote predictions to {args.out}")
    return 0


def _supervised_features(disambiguator, records):
    """Feature vectors per record via the disambiguator's image-rep path."""
    feats, kept, skipped = [], [], 0
    for rec in records:
        try:
            feats.append(disambiguator.image_rep(rec))
            kept.append(rec)
        except VerbsenseError:
            skipped += 1
    return feats, kept, skipped


def _cmd_train_supervised(args) -> int:
    _log_resources(args, ["inventory", "dataset", "embeddings", "features"])
    _log_config(channel=args.channel, setting=args.setting, ratio=args.ratio,
                seed=args.seed, l2=args.l2, epochs=args.epochs, lr=args.lr)
    inv = load_inventory(args.inventory)
    records = load_dataset(args.dataset, inv)
    verbs = select_supervised_verbs(records, inv, min_images=args.min_images)
    if not verbs:
        raise VerbsenseError("no verb qualifies for supervised training")
    print(f"{len(verbs)} verbs qualify: {', '.join(verbs)}")
    cfg = _make_config(args, args.channel)
    disambiguator = Disambiguator(inv, cfg, _load_resources(args))
    train_recs, test_recs = split_train_test(
        [r for r in records if r.verb in verbs], ratio=args.ratio, seed=args.seed
    )
    per_verb = {}
    total_correct = total_test = 0
    for verb in verbs:
        classes = tuple(
            sorted({r.gold_sense_id for r in records if r.verb == verb})
        )
        index = {c: i for i, c in enumerate(classes)}
        tr = [r for r in train_recs if r.verb == verb]
        te = [r for r in test_recs if r.verb == verb]
        tr_x, tr_kept, tr_skip = _supervised_features(disambiguator, tr)
        te_x, te_kept, te_skip = _supervised_features(disambiguator, te)
        try:
            model = train_lr(
                [(x, index[r.gold_sense_id]) for x, r in zip(tr_x, tr_kept)],
                l2=args.l2, epochs=args.epochs, lr=args.lr, seed=args.seed,
                verb=verb, classes=classes,
            )
        except VerbsenseError as e:
            per_verb[verb] = {"error": str(e), "skipped": tr_skip + te_skip}
            print(f"{verb}: skipped ({e})")
            continue
        correct = sum(
            predict_lr(model, x)[0] == r.gold_sense_id for x, r in zip(te_x, te_kept)
        )
        per_verb[verb] = {
            "train": len(tr_kept),
            "test": len(te_kept),
            "skipped": tr_skip + te_skip,
            "accuracy": correct / len(te_kept) if te_kept else None,
        }
        total_correct += correct
        total_test += len(te_kept)
        acc = per_verb[verb]["accuracy"]
        print(f"{verb}: train {len(tr_kept)} test {len(te_kept)} "
              f"accuracy {acc if acc is None else f'{acc:.3f}'}")
        if args.models_dir:
            import os

            os.makedirs(args.models_dir, exist_ok=True)
            save_lr_model(model, os.path.join(args.models_dir, f"{verb}.vslr"))
    overall = total_correct / total_test if total_test else None
    print(f"overall test accuracy: {overall if overall is None else f'{overall:.4f}'} "
          f"({total_test} test images)")
    if args.report:
        with open(args.report, "w", encoding="utf-8") as f:
            json.dump(
                {
                    "channel": args.channel,
                    "setting": args.setting,
                    "ratio": args.ratio,
                    "seed": args.seed,
                    "verbs": per_verb,
                    "overall_accuracy": overall,
                    "test_images": total_test,
                },
                f,
                indent=2,
            )
        print(f"wrote report to {args.report}")
    return 0


def _cmd_evaluate(args) -> int:
    _log_resources(
        args,
        ["inventory", "dataset", "embeddings", "features", "sense-manifest",
         "sense-features", "cca-model"],
    )
    inv = load_inventory(args.inventory)
    records = load_dataset(args.dataset, inv)
    if args.channels:
        cells = grid_cells(
            [c.strip() for c in args.channels.split(",") if c.strip()],
            [f.strip() for f in args.fusions.split(",") if f.strip()],
        )
    else:
        cells = list(DEFAULT_CELLS)
    _log_config(cells=cells, setting=args.setting, verb_class=args.verb_class,
                lambda_t=args.lambda_t, lambda_c=args.lambda_c,
                threshold=args.threshold, jobs=args.jobs)
    res = _load_resources(args)
    report = run_grid(
        records,
        inv,
        cells=cells,
        setting=args.setting,
        verb_class=args.verb_class,
        table=res.table,
        image_features=res.image_features,
        sense_manifest=res.sense_manifest,
        sense_features=res.sense_features,
        cca_model=res.cca_model,
        lambda_t=args.lambda_t,
        lambda_c=args.lambda_c,
        pred_threshold=args.threshold,
        depictable_only=not args.all_senses,
        jobs=args.jobs,
    )
    print(format_report(report))
    if args.report:
        with open(args.report, "w", encoding="utf-8") as f:
            json.dump(report.to_dict(), f, indent=2)
        print(f"wrote report to {args.report}")
    return 0


_COMMANDS = {
    "build-senses": _cmd_build_senses,
    "fit-cca": _cmd_fit_cca,
    "disambiguate": _cmd_disambiguate,
    "train-supervised": _cmd_train_supervised,
    "evaluate": _cmd_evaluate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (VerbsenseError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
