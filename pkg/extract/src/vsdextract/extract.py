"""Batch extraction jobs: features to VSDF, objects/descriptions to JSONL,
plus word-embedding export.

Per-image failures (unreadable or corrupt files) are recorded and the
remaining images proceed; every job returns its error list alongside the
success count.
"""

from __future__ import annotations

import json

import numpy as np

from .backends import ImageReadError
from .manifest import ExtractionManifest
from .vsdf import write_vsdf


def _run_per_image(manifest: ExtractionManifest, fn):
    results: dict = {}
    errors: list[tuple[str, str]] = []
    for image_id in sorted(manifest.images):
        try:
            results[image_id] = fn(manifest.images[image_id])
        except (ImageReadError, OSError, ValueError) as e:
            errors.append((image_id, str(e)))
    return results, errors


def extract_image_features(manifest: ExtractionManifest, backend, out_path):
    """One feature vector per readable image, written as VSDF."""
    results, errors = _run_per_image(manifest, backend.features)
    write_vsdf(out_path, backend.dim, results)
    return len(results), errors


def extract_pred_objects(manifest: ExtractionManifest, backend, out_path):
    """Predicted (label, score) pairs per image, one JSON line per image.

    Scores are emitted raw and unfiltered; thresholding happens downstream
    where the engine builds its object-channel representations.
    """
    results, errors = _run_per_image(manifest, backend.predict_objects)
    with open(out_path, "w", encoding="utf-8") as f:
        for image_id in sorted(results):
            pairs = [[label, round(float(score), 6)] for label, score in results[image_id]]
            f.write(json.dumps({"image_id": image_id, "objects": pairs}) + "\n")
    return len(results), errors


def extract_pred_descriptions(manifest: ExtractionManifest, backend, out_path, k: int = 3):
    """k generated descriptions per image, one JSON line per image."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    results, errors = _run_per_image(manifest, lambda path: backend.describe(path, k))
    with open(out_path, "w", encoding="utf-8") as f:
        for image_id in sorted(results):
            f.write(
                json.dumps({"image_id": image_id, "descriptions": results[image_id]}) + "\n"
            )
    return len(results), errors


def export_embeddings(src_path, out_path, limit: int | None = None):
    """Convert word2vec-format vectors (text or binary) to the engine's
    embedding text format: lowercased tokens, first occurrence wins."""
    with open(src_path, "rb") as f:
        header = f.readline().split()
        if len(header) != 2:
            raise ValueError(f"{src_path}: expected 'count dim' header")
        count, dim = int(header[0]), int(header[1])
        if limit is not None:
            count = min(count, limit)
        vectors: dict[str, np.ndarray] = {}
        binary = _looks_binary(src_path)
        for _ in range(count):
            if binary:
                token_bytes = bytearray()
                while True:
                    ch = f.read(1)
                    if not ch or ch == b" ":
                        break
                    if ch != b"\n":
                        token_bytes += ch
                token = token_bytes.decode("utf-8", errors="replace").lower()
                vec = np.frombuffer(f.read(4 * dim), dtype="<f4").astype(np.float64)
            else:
                line = f.readline().decode("utf-8").rstrip("\n")
                if not line:
                    break
                fields = line.split(" ")
                token = fields[0].lower()
                if len(fields) - 1 != dim:
                    raise ValueError(f"{src_path}: token '{token}': expected {dim} values")
                vec = np.array([float(x) for x in fields[1:]])
            if vec.shape != (dim,):
                raise ValueError(f"{src_path}: truncated vector for token '{token}'")
            if token and token not in vectors:
                vectors[token] = vec
    with open(out_path, "w", encoding="utf-8") as f:
        f.write(f"{len(vectors)} {dim}\n")
        for token, vec in vectors.items():
            f.write(token + " " + " ".join(repr(float(x)) for x in vec) + "\n")
    return len(vectors), dim


def _looks_binary(path) -> bool:
    """Heuristic: word2vec .bin files have non-text bytes right after the
    first token of the second line."""
    with open(path, "rb") as f:
        f.readline()
        chunk = f.read(4096)
    if not chunk:
        return False
    sample = chunk[: min(len(chunk), 512)]
    return any(b < 9 for b in sample)
