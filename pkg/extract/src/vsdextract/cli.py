"""Command-line entry point for the extraction jobs.

Exit codes: 0 when the job produced output (including an empty output for
an empty manifest), 1 when every image failed or a fatal error occurred,
2 on usage errors. Per-image failures are printed and do not stop the run.
"""

from __future__ import annotations

import argparse
import sys

from .backends import caption_backend, feature_backend, object_backend
from .extract import (
    export_embeddings,
    extract_image_features,
    extract_pred_descriptions,
    extract_pred_objects,
)
from .manifest import ManifestError, load_manifest


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vsdextract", description="Produce verbsense input files from raw images"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("features", help="image feature vectors -> VSDF")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--backend", default=None, help="stub | vgg16 (default: manifest)")
    p.add_argument("--dim", type=int, default=4096, help="stub backend dimensionality")
    p.add_argument("--weights", default="IMAGENET1K_V1",
                   help="vgg16 weights: checkpoint name, .pth path, or 'none'")

    p = sub.add_parser("objects", help="predicted object labels with scores -> JSONL")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--backend", default=None)
    p.add_argument("--top-k", type=int, default=5)
    p.add_argument("--weights", default="IMAGENET1K_V1")

    p = sub.add_parser("descriptions", help="generated image descriptions -> JSONL")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--backend", default=None, help="stub | module:callable")
    p.add_argument("--k", type=int, default=3, help="descriptions per image")

    p = sub.add_parser("export-embeddings",
                       help="word2vec text/binary vectors -> embedding text format")
    p.add_argument("--src", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--limit", type=int, default=None)

    return parser


def _finish(job: str, produced: int, errors, out: str) -> int:
    for image_id, message in errors:
        print(f"error: {image_id}: {message}", file=sys.stderr)
    print(f"{job}: wrote {produced} record(s) to {out}"
          + (f" ({len(errors)} failed)" if errors else ""))
    if errors and produced == 0:
        return 1
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "features":
            manifest = load_manifest(args.manifest)
            weights = None if args.weights == "none" else args.weights
            backend = feature_backend(
                args.backend or manifest.feature_backend, dim=args.dim, weights=weights
            )
            produced, errors = extract_image_features(manifest, backend, args.out)
            return _finish("features", produced, errors, args.out)
        if args.command == "objects":
            manifest = load_manifest(args.manifest)
            backend = object_backend(
                args.backend or manifest.object_backend, top_k=args.top_k
            )
            produced, errors = extract_pred_objects(manifest, backend, args.out)
            return _finish("objects", produced, errors, args.out)
        if args.command == "descriptions":
            manifest = load_manifest(args.manifest)
            backend = caption_backend(args.backend or manifest.caption_backend)
            produced, errors = extract_pred_descriptions(
                manifest, backend, args.out, k=args.k
            )
            return _finish("descriptions", produced, errors, args.out)
        if args.command == "export-embeddings":
            count, dim = export_embeddings(args.src, args.out, limit=args.limit)
            print(f"export-embeddings: wrote {count} tokens (dim {dim}) to {args.out}")
            return 0
        raise AssertionError(args.command)
    except (ManifestError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
